#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <sparsestep/baselines.hpp>
#include <sparsestep/cross_validation.hpp>
#include <sparsestep/datagen.hpp>
#include <sparsestep/io.hpp>
#include <sparsestep/penalty.hpp>

namespace sparsestep::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string default_output_root()
{
    if (const char* env = std::getenv("SPARSESTEP_OUTPUT_ROOT"); env && *env) return env;
    return "out";
}

namespace {

template <class F>
int guarded(const char* command, F&& body)
{
    try {
        return body();
    } catch (const InvalidArgument& e) {
        std::cerr << command << ": " << e.what() << '\n';
        return kUsageError;
    } catch (const DataError& e) {
        std::cerr << command << ": " << e.what() << '\n';
        return kDataError;
    } catch (const NumericError& e) {
        std::cerr << command << ": numeric failure: " << e.what() << '\n';
        return kNumericError;
    } catch (const std::exception& e) {
        std::cerr << command << ": " << e.what() << '\n';
        return kDataError;
    }
}

void make_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw DataError("cannot create output directory " + dir.string() +
                        (ec ? ": " + ec.message() : std::string()));
    }
}

void write_manifest(const fs::path& dir, const std::string& command, ordered_json config)
{
    io::write_json(dir / "manifest.json", ordered_json{{"command", command}, {"config", std::move(config)}});
}

} // namespace

int cmd_generate(const GenerateOptions& opts)
{
    return guarded("generate", [&] {
        const bool filtered = !opts.m.empty() || !opts.zeta.empty() || !opts.snr.empty() || !opts.corr.empty();
        if (opts.all && filtered) throw InvalidArgument("--all cannot be combined with scenario filters");
        if (!opts.all && !filtered) throw InvalidArgument("select scenarios with --all or --m/--zeta/--snr/--corr");
        require(opts.n_train >= 2 && opts.n_test >= 1, "--n-train must be >= 2 and --n-test >= 1");

        std::vector<Correlation> kinds;
        for (const auto& c : opts.corr) kinds.push_back(parse_correlation(c));
        const auto grid = generate_scenario_grid(
            opts.n_train, opts.n_test, opts.seed, opts.m.empty() ? kGridM : opts.m,
            opts.zeta.empty() ? kGridZeta : opts.zeta, opts.snr.empty() ? kGridSnr : opts.snr,
            kinds.empty() ? kGridCorrelation : kinds);

        const fs::path out = opts.out_dir;
        make_dir(out);
        for (const auto& spec : grid) {
            io::write_dataset(out / spec.id(), generate_dataset(spec));
        }

        ordered_json ids = ordered_json::array();
        for (const auto& spec : grid) ids.push_back(spec.id());
        write_manifest(out, "generate",
                       {{"out_dir", opts.out_dir},
                        {"all", opts.all},
                        {"m", opts.m.empty() ? kGridM : opts.m},
                        {"zeta", opts.zeta.empty() ? kGridZeta : opts.zeta},
                        {"snr", opts.snr.empty() ? kGridSnr : opts.snr},
                        {"corr", [&] {
                             ordered_json a = ordered_json::array();
                             for (auto k : kinds.empty() ? kGridCorrelation : kinds) a.push_back(std::string(to_string(k)));
                             return a;
                         }()},
                        {"n_train", opts.n_train},
                        {"n_test", opts.n_test},
                        {"seed", opts.seed},
                        {"rng_algorithm", Rng::algorithm_id},
                        {"datasets", ids}});
        std::cout << "wrote " << grid.size() << " dataset(s) to " << out.string() << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_fit(const FitOptions& opts)
{
    return guarded("fit", [&] {
        const Method method = parse_method(opts.method);
        const GeneratedDataset data = io::read_dataset(opts.data_dir);
        SolverSchedule schedule = opts.schedule;

        double lambda = is_penalized(method) ? opts.lambda : 0.0;
        ordered_json cv_json;
        if (opts.cv) {
            const CvResult cv = cv_grid_search(method, data.train, log2_lambda_grid(opts.grid_size),
                                               opts.folds, opts.cv_seed, schedule);
            lambda = cv.best_lambda;
            ordered_json curve = ordered_json::array();
            for (std::size_t l = 0; l < cv.lambdas.size(); ++l) {
                curve.push_back({{"lambda", cv.lambdas[l]},
                                 {"mean_mse", cv.valid[l] ? ordered_json(cv.mean_mse[l]) : ordered_json(nullptr)}});
            }
            cv_json = {{"folds", opts.folds}, {"seed", opts.cv_seed}, {"best_lambda", lambda}, {"curve", curve}};
        }
        require(std::isfinite(lambda) && lambda >= 0.0, "--lambda must be >= 0");

        const auto [train, scaling] = standardize(data.train);
        FitResult fit;
        if (method == Method::sparsestep) {
            schedule.lambda = lambda;
            fit = sparsestep_fit(train, schedule);
        } else {
            const auto start = std::chrono::steady_clock::now();
            const NormalEquations ne = NormalEquations::from(train);
            fit.beta = fit_method(method, train, ne, lambda);
            fit.wall_time = std::chrono::steady_clock::now() - start;
            for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
                if (fit.beta[j] != 0.0) fit.support.push_back(j);
            }
            const double rss = residual_sum_squares(train, fit.beta);
            fit.final_loss = rss + (method == Method::ridge   ? lp_penalty(fit.beta, 2.0, lambda)
                                    : method == Method::lasso ? lp_penalty(fit.beta, 1.0, lambda)
                                                              : 0.0);
        }

        ordered_json result = io::fit_result_json(fit, method, lambda, schedule);
        result["dataset"] = data.spec.id();
        if (opts.cv) result["cv"] = cv_json;

        const fs::path out = opts.out_dir;
        make_dir(out);
        io::write_json(out / "fit.json", result);
        write_manifest(out, "fit",
                       {{"data", opts.data_dir},
                        {"out_dir", opts.out_dir},
                        {"method", opts.method},
                        {"lambda", opts.lambda},
                        {"cv", opts.cv},
                        {"folds", opts.folds},
                        {"grid_size", opts.grid_size},
                        {"cv_seed", opts.cv_seed},
                        {"schedule", io::to_json(schedule)}});
        if (opts.print) std::cout << result.dump(2) << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_benchmark(const BenchmarkOptions& opts)
{
    return guarded("benchmark", [&] {
        BenchmarkConfig config;
        config.methods.clear();
        for (const auto& m : opts.methods) config.methods.push_back(parse_method(m));
        require(!config.methods.empty(), "--methods must name at least one method");
        require(opts.parallel >= 1, "--parallel must be >= 1");
        config.lambda_grid = log2_lambda_grid(opts.grid_size);
        config.folds = opts.folds;
        config.cv_seed = opts.cv_seed;
        config.schedule = opts.schedule;
        config.parallelism = opts.parallel;
        config.alpha = opts.alpha;
        if (std::find(config.methods.begin(), config.methods.end(), Method::sparsestep) == config.methods.end()) {
            config.reference = config.methods.front();
        }

        const fs::path root = opts.data_root;
        if (!fs::is_directory(root)) throw DataError("data root " + root.string() + " is not a directory");
        std::vector<fs::path> dirs;
        for (const auto& entry : fs::directory_iterator(root)) {
            if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) dirs.push_back(entry.path());
        }
        std::sort(dirs.begin(), dirs.end());
        if (dirs.empty()) throw DataError("no datasets found under " + root.string());

        std::vector<GeneratedDataset> datasets;
        for (const auto& d : dirs) datasets.push_back(io::read_dataset(d));

        const BenchmarkReport report = run_benchmark(datasets, config);
        const fs::path out = opts.out_dir;
        make_dir(out);
        io::write_report(out, report, config);
        ordered_json ids = ordered_json::array();
        for (const auto& id : report.dataset_ids) ids.push_back(id);
        write_manifest(out, "benchmark",
                       {{"data_root", opts.data_root},
                        {"out_dir", opts.out_dir},
                        {"methods", opts.methods},
                        {"reference", std::string(to_string(config.reference))},
                        {"folds", opts.folds},
                        {"grid_size", opts.grid_size},
                        {"cv_seed", opts.cv_seed},
                        {"parallel", opts.parallel},
                        {"alpha", opts.alpha},
                        {"schedule", io::to_json(opts.schedule)},
                        {"datasets", ids}});
        std::size_t failed = 0;
        for (const auto& r : report.records) failed += r.ok ? 0 : 1;
        std::cout << "benchmarked " << report.dataset_ids.size() << " dataset(s) x " << report.methods.size()
                  << " method(s), " << failed << " failed cell(s); report in " << out.string() << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_curves(const CurvesOptions& opts)
{
    return guarded("curves", [&] {
        require(opts.points >= 2, "--points must be >= 2");
        require(opts.majorizer_gamma_sq > 0.0, "--majorizer-gamma-sq must be > 0");
        const fs::path out = opts.out_dir;
        make_dir(out);

        const double lo = -2.0, hi = 2.0;
        auto sample = [&](int i) { return lo + (hi - lo) * i / (opts.points - 1); };
        std::vector<PenaltyParams> params;
        for (double g2 : opts.gamma_sq) {
            require(g2 > 0.0, "--gamma-sq values must be > 0");
            params.emplace_back(opts.lambda, std::sqrt(g2));
        }

        {
            std::ofstream csv(out / "penalty_curves.csv", std::ios::binary | std::ios::trunc);
            if (!csv) throw DataError("cannot write penalty_curves.csv");
            csv << "beta,ridge,lasso";
            for (double g2 : opts.gamma_sq) csv << ",sparsestep_gamma_sq_" << io::format_double(g2);
            csv << '\n';
            for (int i = 0; i < opts.points; ++i) {
                const double b = sample(i);
                const Vector v = Vector::Constant(1, b);
                csv << io::format_double(b) << ',' << io::format_double(lp_penalty(v, 2.0, opts.lambda)) << ','
                    << io::format_double(lp_penalty(v, 1.0, opts.lambda));
                for (const auto& p : params) csv << ',' << io::format_double(sparsestep_penalty(b, p));
                csv << '\n';
            }
        }
        {
            const double gamma = std::sqrt(opts.majorizer_gamma_sq);
            const PenaltyParams unit(1.0, gamma);
            std::ofstream csv(out / "majorizer_curves.csv", std::ios::binary | std::ios::trunc);
            if (!csv) throw DataError("cannot write majorizer_curves.csv");
            csv << "x,penalty";
            for (double y : opts.support_points) csv << ",majorizer_y_" << io::format_double(y);
            csv << '\n';
            for (int i = 0; i < opts.points; ++i) {
                const double x = sample(i);
                csv << io::format_double(x) << ',' << io::format_double(sparsestep_penalty(x, unit));
                for (double y : opts.support_points) csv << ',' << io::format_double(majorizer_value(x, y, gamma));
                csv << '\n';
            }
        }
        write_manifest(out, "curves",
                       {{"out_dir", opts.out_dir},
                        {"gamma_sq", opts.gamma_sq},
                        {"lambda", opts.lambda},
                        {"points", opts.points},
                        {"range", {lo, hi}},
                        {"majorizer_gamma_sq", opts.majorizer_gamma_sq},
                        {"support_points", opts.support_points}});
        return static_cast<int>(kOk);
    });
}

namespace {

void add_schedule_options(CLI::App* cmd, SolverSchedule& s)
{
    cmd->add_option("--gamma0", s.gamma0, "Initial gamma")->capture_default_str();
    cmd->add_option("--gamma-stop", s.gamma_stop, "Annealing stops once gamma <= this")->capture_default_str();
    cmd->add_option("--gamma-step", s.gamma_step, "Divisor applied to gamma per level")->capture_default_str();
    cmd->add_option("--t-max", s.t_max, "Majorization updates per gamma level")->capture_default_str();
    cmd->add_option("--epsilon", s.epsilon, "Final zeroing threshold")->capture_default_str();
}

} // namespace

int run(int argc, char** argv)
{
    CLI::App app{"SparseStep sparse regression toolkit"};
    app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");
    app.require_subcommand(1);
    const std::string root = default_output_root();

    GenerateOptions gen;
    gen.out_dir = (fs::path(root) / "datasets").string();
    auto* g = app.add_subcommand("generate", "Write synthetic scenario datasets");
    g->add_option("--out", gen.out_dir, "Output directory")->capture_default_str();
    g->add_flag("--all", gen.all, "Every cell of the scenario grid");
    g->add_option("--m", gen.m, "Variable counts to include")->delimiter(',');
    g->add_option("--zeta", gen.zeta, "Sparsity percentages to include")->delimiter(',');
    g->add_option("--snr", gen.snr, "Signal-to-noise ratios to include")->delimiter(',');
    g->add_option("--corr", gen.corr, "Correlation kinds: uncorrelated, constant, noise")->delimiter(',');
    g->add_option("--n-train", gen.n_train, "Training rows")->capture_default_str();
    g->add_option("--n-test", gen.n_test, "Test rows")->capture_default_str();
    g->add_option("--seed", gen.seed, "Base seed")->capture_default_str();

    FitOptions fit;
    fit.out_dir = (fs::path(root) / "fit").string();
    auto* f = app.add_subcommand("fit", "Fit one method on a dataset directory");
    f->add_option("--data", fit.data_dir, "Dataset directory")->required();
    f->add_option("--out", fit.out_dir, "Output directory")->capture_default_str();
    f->add_option("--method", fit.method, "ols, ridge, lasso or sparsestep")->capture_default_str();
    f->add_option("--lambda", fit.lambda, "Regularization weight")->capture_default_str();
    f->add_flag("--cv", fit.cv, "Select lambda by k-fold CV over the log2 grid");
    f->add_option("--folds", fit.folds, "CV folds")->capture_default_str();
    f->add_option("--grid-size", fit.grid_size, "Lambda grid points on [2^-15, 2^15]")->capture_default_str();
    f->add_option("--cv-seed", fit.cv_seed, "Fold assignment seed")->capture_default_str();
    f->add_flag("--print", fit.print, "Also print the result JSON");
    add_schedule_options(f, fit.schedule);

    BenchmarkOptions bench;
    bench.data_root = (fs::path(root) / "datasets").string();
    bench.out_dir = (fs::path(root) / "benchmark").string();
    auto* b = app.add_subcommand("benchmark", "CV-tune, refit and rank methods over datasets");
    b->add_option("--data-root", bench.data_root, "Directory of dataset directories")->capture_default_str();
    b->add_option("--out", bench.out_dir, "Report directory")->capture_default_str();
    b->add_option("--methods", bench.methods, "Methods to compare")->delimiter(',')->capture_default_str();
    b->add_option("--folds", bench.folds, "CV folds")->capture_default_str();
    b->add_option("--grid-size", bench.grid_size, "Lambda grid points on [2^-15, 2^15]")->capture_default_str();
    b->add_option("--cv-seed", bench.cv_seed, "Fold assignment seed")->capture_default_str();
    b->add_option("--parallel", bench.parallel, "Concurrent (dataset, method) cells")->capture_default_str();
    b->add_option("--alpha", bench.alpha, "Family-wise significance level")->capture_default_str();
    add_schedule_options(b, bench.schedule);

    CurvesOptions curves;
    curves.out_dir = (fs::path(root) / "curves").string();
    auto* c = app.add_subcommand("curves", "Emit penalty and majorizer curve samples as CSV");
    c->add_option("--out", curves.out_dir, "Output directory")->capture_default_str();
    c->add_option("--gamma-sq", curves.gamma_sq, "gamma^2 values for SparseStep curves")->delimiter(',')->capture_default_str();
    c->add_option("--lambda", curves.lambda, "Penalty weight")->capture_default_str();
    c->add_option("--points", curves.points, "Samples on [-2, 2]")->capture_default_str();
    c->add_option("--majorizer-gamma-sq", curves.majorizer_gamma_sq, "gamma^2 for majorizer curves")
        ->capture_default_str();
    c->add_option("--support-points", curves.support_points, "Supporting points y")->delimiter(',')->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kUsageError);
    }

    if (g->parsed()) return cmd_generate(gen);
    if (f->parsed()) return cmd_fit(fit);
    if (b->parsed()) return cmd_benchmark(bench);
    if (c->parsed()) return cmd_curves(curves);
    return kUsageError;
}

} // namespace sparsestep::cli
