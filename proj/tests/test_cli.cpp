#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include <sparsestep/baselines.hpp>
#include <sparsestep/benchmark.hpp>
#include <sparsestep/io.hpp>

#include "../tools/commands.hpp"

using namespace sparsestep;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("sparsestep_cli_" + name + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "sparsestep");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::vector<std::string>> read_rows(const fs::path& p)
{
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("generate writes one deterministic scenario directory")
{
    TempDir a("gen_a"), b("gen_b");
    const std::vector<std::string> common{"generate", "--m", "10", "--zeta", "50", "--snr", "1", "--corr",
                                          "uncorrelated", "--n-train", "200", "--n-test", "100", "--seed", "7"};
    auto args_a = common;
    args_a.insert(args_a.end(), {"--out", a.path.string()});
    auto args_b = common;
    args_b.insert(args_b.end(), {"--out", b.path.string()});
    REQUIRE(run_cli(args_a) == cli::kOk);
    REQUIRE(run_cli(args_b) == cli::kOk);

    const fs::path cell = a.path / "m10_zeta50_snr1_uncorrelated";
    for (const char* f : {"X_train.csv", "y_train.csv", "X_test.csv", "y_test.csv", "beta_true.csv", "meta.json"}) {
        CHECK(fs::exists(cell / f));
        CHECK(slurp(cell / f) == slurp(b.path / "m10_zeta50_snr1_uncorrelated" / f));
    }
    const auto X = io::read_csv_matrix(cell / "X_train.csv");
    CHECK(X.rows() == 200);
    CHECK(X.cols() == 10);
    const auto beta = io::read_csv_vector(cell / "beta_true.csv");
    CHECK((beta.tail(5).array() == 0.0).all());
    CHECK((beta.head(5).array() != 0.0).all());

    const json manifest = load_json(a.path / "manifest.json");
    CHECK(manifest["command"] == "generate");
    CHECK(manifest["config"]["seed"] == 7);
    CHECK(manifest["config"]["datasets"].size() == 1);
}

TEST_CASE("generate rejects ambiguous selections")
{
    TempDir t("gen_bad");
    CHECK(run_cli({"generate", "--out", t.path.string()}) == cli::kUsageError);
    CHECK(run_cli({"generate", "--all", "--m", "10", "--out", t.path.string()}) == cli::kUsageError);
    CHECK(run_cli({"generate", "--m", "10", "--corr", "bogus", "--out", t.path.string()}) == cli::kUsageError);
}

TEST_CASE("fit with lambda zero matches ols")
{
    TempDir t("fit");
    REQUIRE(run_cli({"generate", "--m", "10", "--zeta", "25", "--snr", "10", "--corr", "constant", "--n-train",
                     "300", "--n-test", "50", "--out", t.path.string()}) == cli::kOk);
    const std::string data = (t.path / "m10_zeta25_snr10_constant").string();
    REQUIRE(run_cli({"fit", "--data", data, "--method", "sparsestep", "--lambda", "0", "--out",
                     (t.path / "ss").string()}) == cli::kOk);
    REQUIRE(run_cli({"fit", "--data", data, "--method", "ols", "--out", (t.path / "ols").string()}) == cli::kOk);
    const json ss = load_json(t.path / "ss" / "fit.json");
    const json ols = load_json(t.path / "ols" / "fit.json");
    REQUIRE(ss["coefficients"].size() == 10);
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(ss["coefficients"][j].get<double>() == doctest::Approx(ols["coefficients"][j].get<double>()).epsilon(1e-6));
    }
    CHECK(ss["descent_trace"].size() == 47 * 3);
    CHECK(ss["dataset"] == "m10_zeta25_snr10_constant");
    CHECK(fs::exists(t.path / "ss" / "manifest.json"));

    const GeneratedDataset d = io::read_dataset(data);
    const auto [train, scaling] = standardize(d.train);
    const Vector direct = ols_fit(train);
    for (Eigen::Index j = 0; j < 10; ++j) {
        CHECK(ols["coefficients"][static_cast<std::size_t>(j)].get<double>() == doctest::Approx(direct[j]));
    }
}

TEST_CASE("fit error exit codes")
{
    TempDir t("fit_err");
    CHECK(run_cli({"fit", "--data", (t.path / "missing").string(), "--out", t.path.string()}) == cli::kDataError);
    REQUIRE(run_cli({"generate", "--m", "10", "--zeta", "0", "--snr", "1", "--corr", "noise", "--n-train", "50",
                     "--n-test", "10", "--out", t.path.string()}) == cli::kOk);
    const std::string data = (t.path / "m10_zeta0_snr1_noise").string();
    CHECK(run_cli({"fit", "--data", data, "--method", "elasticnet", "--out", t.path.string()}) == cli::kUsageError);
    CHECK(run_cli({"fit", "--data", data, "--lambda", "-1", "--out", t.path.string()}) == cli::kUsageError);
    CHECK(run_cli({"fit", "--data", data, "--gamma-step", "1", "--out", t.path.string()}) == cli::kUsageError);
    CHECK(run_cli({"nonsense"}) == cli::kUsageError);
}

TEST_CASE("curves reproduce penalty and majorizer values")
{
    TempDir t("curves");
    REQUIRE(run_cli({"curves", "--out", t.path.string()}) == cli::kOk);
    const auto pen = read_rows(t.path / "penalty_curves.csv");
    REQUIRE(pen.size() == 402);
    CHECK(pen[0] == std::vector<std::string>{"beta", "ridge", "lasso", "sparsestep_gamma_sq_0.29999999999999999",
                                             "sparsestep_gamma_sq_0.10000000000000001",
                                             "sparsestep_gamma_sq_0.050000000000000003"});
    std::map<double, std::vector<double>> by_beta;
    for (std::size_t r = 1; r < pen.size(); ++r) {
        std::vector<double> v;
        for (const auto& c : pen[r]) v.push_back(std::stod(c));
        by_beta[v[0]] = v;
    }
    CHECK(by_beta.at(-1.0)[2] == 1.0);
    CHECK(by_beta.at(-1.0)[1] == 1.0);
    CHECK(by_beta.at(0.25)[4] == doctest::Approx(0.38462).epsilon(1e-4));
    CHECK(by_beta.at(0.0)[3] == 0.0);

    const auto maj = read_rows(t.path / "majorizer_curves.csv");
    REQUIRE(maj.size() == 402);
    for (std::size_t r = 1; r < maj.size(); ++r) {
        const double x = std::stod(maj[r][0]);
        const double penalty = std::stod(maj[r][1]);
        CHECK(std::stod(maj[r][2]) == doctest::Approx(x * x / 0.1));
        for (std::size_t c = 2; c < maj[r].size(); ++c) CHECK(std::stod(maj[r][c]) >= penalty - 1e-12);
        if (x == 0.5) CHECK(std::stod(maj[r][4]) == doctest::Approx(penalty));
    }
    CHECK(load_json(t.path / "manifest.json")["command"] == "curves");
}

TEST_CASE("benchmark end to end matches library and is reproducible")
{
    TempDir t("bench");
    const std::string data = (t.path / "data").string();
    REQUIRE(run_cli({"generate", "--m", "10", "--zeta", "0,50", "--snr", "10", "--corr", "uncorrelated",
                     "--n-train", "150", "--n-test", "50", "--out", data}) == cli::kOk);
    const std::vector<std::string> bench{"benchmark", "--data-root", data, "--methods", "ols,lasso,sparsestep",
                                         "--folds", "5", "--grid-size", "9"};
    auto first = bench;
    first.insert(first.end(), {"--out", (t.path / "r1").string()});
    auto second = bench;
    second.insert(second.end(), {"--out", (t.path / "r2").string(), "--parallel", "2"});
    REQUIRE(run_cli(first) == cli::kOk);
    REQUIRE(run_cli(second) == cli::kOk);

    const auto rows = read_rows(t.path / "r1" / "records.csv");
    REQUIRE(rows.size() == 1 + 2 * 3 * 5);
    std::map<std::string, int> per_metric;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        ++per_metric[rows[r][2]];
        CHECK(rows[r][4] == "ok");
    }
    CHECK(per_metric["beta_mse"] == 6);
    CHECK(per_metric["test_mse"] == 6);
    CHECK(slurp(t.path / "r1" / "stats.json") == slurp(t.path / "r2" / "stats.json"));
    CHECK(fs::exists(t.path / "r1" / "ranks_beta_mse.csv"));
    CHECK(load_json(t.path / "r1" / "manifest.json")["config"]["datasets"].size() == 2);

    // per-cell values equal direct library calls
    std::vector<GeneratedDataset> ds{io::read_dataset(t.path / "data" / "m10_zeta0_snr10_uncorrelated"),
                                     io::read_dataset(t.path / "data" / "m10_zeta50_snr10_uncorrelated")};
    BenchmarkConfig cfg;
    cfg.methods = {Method::ols, Method::lasso, Method::sparsestep};
    cfg.lambda_grid = log2_lambda_grid(9);
    cfg.folds = 5;
    const BenchmarkReport rep = run_benchmark(ds, cfg);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r][2] != "test_mse") continue;
        const std::size_t d = rows[r][0] == rep.dataset_ids[0] ? 0 : 1;
        const Method m = parse_method(rows[r][1]);
        const std::size_t j = static_cast<std::size_t>(
            std::find(cfg.methods.begin(), cfg.methods.end(), m) - cfg.methods.begin());
        CHECK(std::stod(rows[r][3]) == rep.record(d, j).test_mse);
    }
}

TEST_CASE("benchmark reports missing data root")
{
    TempDir t("bench_err");
    CHECK(run_cli({"benchmark", "--data-root", (t.path / "nope").string(), "--out", t.path.string()}) ==
          cli::kDataError);
    CHECK(run_cli({"benchmark", "--data-root", t.path.string(), "--out", (t.path / "o").string()}) ==
          cli::kDataError);
}
