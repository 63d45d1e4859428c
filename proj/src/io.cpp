#include <sparsestep/io.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace sparsestep::io {

using nlohmann::ordered_json;

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path)
{
    out.flush();
    if (!out) throw DataError("write failed for " + path.string());
}

} // namespace

void write_csv(const fs::path& path, const Matrix& values)
{
    auto out = open_out(path);
    std::string line;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        line.clear();
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            if (j) line += ',';
            line += format_double(values(i, j));
        }
        line += '\n';
        out << line;
    }
    finish(out, path);
}

void write_csv(const fs::path& path, const Vector& values)
{
    write_csv(path, Matrix(values));
}

Matrix read_csv_matrix(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<double> data;
    Eigen::Index cols = -1;
    Eigen::Index rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Eigen::Index count = 0;
        const char* p = line.data();
        const char* end = p + line.size();
        while (true) {
            double v = 0.0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc()) {
                throw DataError(path.string() + ": unparsable value on row " + std::to_string(rows + 1));
            }
            data.push_back(v);
            ++count;
            if (next == end) break;
            if (*next != ',') {
                throw DataError(path.string() + ": unexpected character on row " + std::to_string(rows + 1));
            }
            p = next + 1;
        }
        if (cols >= 0 && count != cols) {
            throw DataError(path.string() + ": ragged row " + std::to_string(rows + 1));
        }
        cols = count;
        ++rows;
    }
    if (rows == 0) throw DataError(path.string() + ": empty file");
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        data.data(), rows, cols);
}

Vector read_csv_vector(const fs::path& path)
{
    const Matrix m = read_csv_matrix(path);
    if (m.cols() != 1) throw DataError(path.string() + ": expected a single column");
    return m.col(0);
}

ordered_json to_json(const ScenarioSpec& spec)
{
    return ordered_json{{"id", spec.id()},
                        {"m", spec.m},
                        {"zeta", spec.zeta},
                        {"zero_count", spec.zero_count()},
                        {"snr", spec.snr},
                        {"correlation", std::string(to_string(spec.correlation))},
                        {"n_train", spec.n_train},
                        {"n_test", spec.n_test},
                        {"seed", spec.seed}};
}

ScenarioSpec scenario_from_json(const nlohmann::json& j)
{
    try {
        ScenarioSpec spec;
        spec.m = j.at("m").get<int>();
        spec.zeta = j.at("zeta").get<int>();
        spec.snr = j.at("snr").get<double>();
        spec.correlation = parse_correlation(j.at("correlation").get<std::string>());
        spec.n_train = j.at("n_train").get<int>();
        spec.n_test = j.at("n_test").get<int>();
        spec.seed = j.at("seed").get<std::uint64_t>();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed scenario metadata: ") + e.what());
    }
}

ordered_json to_json(const SolverSchedule& s)
{
    ordered_json beta0 = ordered_json::array();
    for (Eigen::Index j = 0; j < s.beta0.size(); ++j) beta0.push_back(s.beta0[j]);
    return ordered_json{{"gamma0", s.gamma0},   {"gamma_stop", s.gamma_stop},
                        {"gamma_step", s.gamma_step}, {"t_max", s.t_max},
                        {"epsilon", s.epsilon}, {"beta0", s.beta0.size() ? beta0 : ordered_json("zero")},
                        {"lambda", s.lambda}};
}

void write_json(const fs::path& path, const ordered_json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

void write_dataset(const fs::path& dir, const GeneratedDataset& data)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
    write_csv(dir / "X_train.csv", data.train.X);
    write_csv(dir / "y_train.csv", data.train.y);
    write_csv(dir / "X_test.csv", data.test.X);
    write_csv(dir / "y_test.csv", data.test.y);
    write_csv(dir / "beta_true.csv", data.beta_true);

    ordered_json mu = ordered_json::array();
    for (Eigen::Index j = 0; j < data.mu.size(); ++j) mu.push_back(data.mu[j]);
    ordered_json meta{{"spec", to_json(data.spec)},
                      {"seed", data.spec.seed},
                      {"rng_algorithm", data.rng_algorithm},
                      {"noise_scale", data.noise_scale},
                      {"noise_epsilon", data.noise_epsilon},
                      {"noise_dim", data.noise_dim},
                      {"mu", mu}};
    write_json(dir / "meta.json", meta);
}

GeneratedDataset read_dataset(const fs::path& dir)
{
    std::ifstream in(dir / "meta.json");
    if (!in) throw DataError("missing " + (dir / "meta.json").string());
    nlohmann::json meta;
    try {
        in >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("cannot parse " + (dir / "meta.json").string() + ": " + e.what());
    }
    GeneratedDataset data;
    data.spec = scenario_from_json(meta.at("spec"));
    data.rng_algorithm = meta.value("rng_algorithm", std::string());
    data.noise_scale = meta.value("noise_scale", 0.0);
    data.noise_epsilon = meta.value("noise_epsilon", kNoiseEpsilon);
    data.noise_dim = meta.value("noise_dim", kNoiseDim);
    if (meta.contains("mu")) {
        const auto& mu = meta["mu"];
        data.mu.resize(static_cast<Eigen::Index>(mu.size()));
        for (std::size_t j = 0; j < mu.size(); ++j) data.mu[static_cast<Eigen::Index>(j)] = mu[j].get<double>();
    }
    data.train = Dataset{read_csv_matrix(dir / "X_train.csv"), read_csv_vector(dir / "y_train.csv")};
    data.test = Dataset{read_csv_matrix(dir / "X_test.csv"), read_csv_vector(dir / "y_test.csv")};
    data.beta_true = read_csv_vector(dir / "beta_true.csv");
    if (data.train.X.rows() != data.train.y.size() || data.test.X.rows() != data.test.y.size() ||
        data.train.X.cols() != data.beta_true.size() || data.test.X.cols() != data.beta_true.size()) {
        throw DataError(dir.string() + ": inconsistent dataset dimensions");
    }
    return data;
}

ordered_json fit_result_json(const FitResult& fit, Method method, double lambda,
                             const SolverSchedule& schedule)
{
    ordered_json beta = ordered_json::array();
    for (Eigen::Index j = 0; j < fit.beta.size(); ++j) beta.push_back(fit.beta[j]);
    ordered_json support = ordered_json::array();
    for (auto j : fit.support) support.push_back(j);
    ordered_json trace = ordered_json::array();
    for (const auto& t : fit.descent_trace) {
        trace.push_back({{"gamma", t.gamma}, {"iteration", t.iteration}, {"loss", t.loss}});
    }
    ordered_json out{{"method", std::string(to_string(method))},
                     {"lambda", lambda},
                     {"coefficients", beta},
                     {"support", support},
                     {"final_loss", fit.final_loss},
                     {"descent_trace", trace},
                     {"wall_time_seconds", fit.wall_time.count()}};
    if (method == Method::sparsestep) out["schedule"] = to_json(schedule);
    return out;
}

namespace {

ordered_json friedman_json(const FriedmanResult& f)
{
    auto finite_or_null = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
    return ordered_json{{"chi2", f.chi2},
                        {"p_value_chi2", f.p_value_chi2},
                        {"f_stat", finite_or_null(f.f_stat)},
                        {"p_value_f", f.p_value_f},
                        {"df1", f.df1},
                        {"df2", f.df2},
                        {"perfect_consistency", f.perfect_consistency}};
}

ordered_json metric_json(const MetricStatistics& s)
{
    ordered_json mean = ordered_json::object();
    const Vector mr = s.ranks.mean_ranks();
    for (std::size_t j = 0; j < s.ranks.methods.size(); ++j) {
        mean[s.ranks.methods[j]] = mr[static_cast<Eigen::Index>(j)];
    }
    ordered_json bw = ordered_json::object();
    for (std::size_t j = 0; j < s.ranks.methods.size(); ++j) {
        bw[s.ranks.methods[j]] = {{"times_best", s.best_worst[j].times_best},
                                  {"times_worst", s.best_worst[j].times_worst}};
    }
    ordered_json out{{"metric", std::string(to_string(s.metric))},
                     {"higher_is_better", higher_is_better(s.metric)},
                     {"mean_ranks", mean},
                     {"best_worst", bw}};
    out["friedman"] = s.friedman ? friedman_json(*s.friedman) : ordered_json(nullptr);
    if (s.holm) {
        ordered_json holm = ordered_json::array();
        for (const auto& e : s.holm->entries) {
            holm.push_back({{"hypothesis", e.hypothesis},
                            {"p_value", e.p_value},
                            {"threshold", e.threshold},
                            {"reject", e.reject}});
        }
        out["holm"] = {{"alpha", s.holm->alpha}, {"entries", holm}};
    } else {
        out["holm"] = nullptr;
    }
    return out;
}

ordered_json header_json(const BenchmarkReport& report, const BenchmarkConfig& config)
{
    ordered_json methods = ordered_json::array();
    for (Method m : report.methods) methods.push_back(std::string(to_string(m)));
    ordered_json complete = ordered_json::array();
    for (Method m : report.complete_methods) complete.push_back(std::string(to_string(m)));
    ordered_json failures = ordered_json::array();
    for (const auto& r : report.records) {
        if (!r.ok) {
            failures.push_back({{"dataset", r.dataset_id},
                                {"method", std::string(to_string(r.method))},
                                {"error", r.error}});
        }
    }
    return ordered_json{{"datasets", report.dataset_ids.size()},
                        {"methods", methods},
                        {"ranked_methods", complete},
                        {"reference", std::string(to_string(config.reference))},
                        {"equality_threshold", config.equality_threshold},
                        {"failures", failures}};
}

} // namespace

ordered_json stats_json(const BenchmarkReport& report, const BenchmarkConfig& config)
{
    ordered_json out = header_json(report, config);
    ordered_json metrics = ordered_json::array();
    for (const auto& s : report.statistics) {
        if (s.metric != Metric::fit_seconds) metrics.push_back(metric_json(s));
    }
    out["metrics"] = metrics;
    return out;
}

void write_report(const fs::path& dir, const BenchmarkReport& report, const BenchmarkConfig& config)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());

    {
        const fs::path path = dir / "records.csv";
        auto out = open_out(path);
        out << "dataset,method,metric,value,status\n";
        for (const auto& r : report.records) {
            const std::string method(to_string(r.method));
            const char* status = r.ok ? "ok" : "failed";
            auto row = [&](std::string_view metric, double v) {
                out << r.dataset_id << ',' << method << ',' << metric << ','
                    << (std::isfinite(v) ? format_double(v) : std::string("NA")) << ',' << status << '\n';
            };
            row("beta_mse", r.beta_mse);
            row("sparsity_hitrate", r.sparsity_hitrate);
            row("test_mse", r.test_mse);
            row("fit_seconds", r.fit_seconds);
            row("chosen_lambda", r.chosen_lambda);
        }
        finish(out, path);
    }

    for (const auto& s : report.statistics) {
        const fs::path path = dir / ("ranks_" + std::string(to_string(s.metric)) + ".csv");
        auto out = open_out(path);
        out << "dataset";
        for (const auto& m : s.ranks.methods) out << ',' << m;
        out << '\n';
        for (std::size_t d = 0; d < s.ranks.datasets.size(); ++d) {
            out << s.ranks.datasets[d];
            for (Eigen::Index j = 0; j < s.ranks.ranks.cols(); ++j) {
                out << ',' << format_double(s.ranks.ranks(static_cast<Eigen::Index>(d), j));
            }
            out << '\n';
        }
        finish(out, path);
    }

    write_json(dir / "stats.json", stats_json(report, config));

    ordered_json timing = header_json(report, config);
    timing["metrics"] = ordered_json::array();
    for (const auto& s : report.statistics) {
        if (s.metric == Metric::fit_seconds) timing["metrics"].push_back(metric_json(s));
    }
    write_json(dir / "timing_stats.json", timing);
}

} // namespace sparsestep::io
