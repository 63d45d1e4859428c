#include <sparsestep/benchmark.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <thread>

#include <sparsestep/baselines.hpp>
#include <sparsestep/metrics.hpp>

namespace sparsestep {

std::string_view to_string(Metric metric)
{
    switch (metric) {
    case Metric::beta_mse: return "beta_mse";
    case Metric::sparsity_hitrate: return "sparsity_hitrate";
    case Metric::test_mse: return "test_mse";
    case Metric::fit_seconds: return "fit_seconds";
    }
    return "unknown";
}

bool higher_is_better(Metric metric)
{
    return metric == Metric::sparsity_hitrate;
}

double metric_value(const MetricRecord& rec, Metric metric)
{
    switch (metric) {
    case Metric::beta_mse: return rec.beta_mse;
    case Metric::sparsity_hitrate: return rec.sparsity_hitrate;
    case Metric::test_mse: return rec.test_mse;
    case Metric::fit_seconds: return rec.fit_seconds;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::uint64_t dataset_cv_seed(std::uint64_t cv_seed, const ScenarioSpec& spec)
{
    return derive_seed(cv_seed, spec.seed);
}

MetricRecord run_cell(const GeneratedDataset& data, Method method, const BenchmarkConfig& config)
{
    MetricRecord rec;
    rec.dataset_id = data.spec.id();
    rec.method = method;
    const auto start = std::chrono::steady_clock::now();
    try {
        const CvResult cv = cv_grid_search(method, data.train, config.lambda_grid, config.folds,
                                           dataset_cv_seed(config.cv_seed, data.spec), config.schedule);
        rec.chosen_lambda = cv.best_lambda;

        auto [train, scaling] = standardize(data.train);
        const NormalEquations ne = NormalEquations::from(train);
        rec.beta = fit_method(method, train, ne, cv.best_lambda, config.schedule);

        const Vector y_pred = (scaling.apply(data.test.X) * rec.beta).array() + scaling.response_mean;
        rec.test_mse = test_mse(y_pred, data.test.y);
        rec.beta_mse = beta_mse(rec.beta, data.beta_true);
        rec.sparsity_hitrate = sparsity_hitrate(rec.beta, data.beta_true);
    } catch (const Error& e) {
        rec.ok = false;
        rec.error = e.what();
        rec.beta_mse = rec.sparsity_hitrate = rec.test_mse = std::numeric_limits<double>::quiet_NaN();
    }
    rec.fit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

BenchmarkReport summarize(std::vector<std::string> dataset_ids, std::vector<Method> methods,
                          std::vector<MetricRecord> records, const BenchmarkConfig& config)
{
    require(records.size() == dataset_ids.size() * methods.size(),
            "summarize: record count does not match datasets x methods");
    BenchmarkReport report;
    report.dataset_ids = std::move(dataset_ids);
    report.methods = std::move(methods);
    report.records = std::move(records);

    const std::size_t N = report.dataset_ids.size();
    const std::size_t K = report.methods.size();
    std::vector<std::size_t> columns;
    for (std::size_t j = 0; j < K; ++j) {
        bool complete = true;
        for (std::size_t d = 0; d < N; ++d) complete = complete && report.record(d, j).ok;
        if (complete) {
            columns.push_back(j);
            report.complete_methods.push_back(report.methods[j]);
        }
    }
    if (columns.empty() || N == 0) return report;

    std::vector<std::string> names;
    for (Method m : report.complete_methods) names.emplace_back(to_string(m));
    const bool has_reference = std::find(report.complete_methods.begin(), report.complete_methods.end(),
                                         config.reference) != report.complete_methods.end();

    for (Metric metric : {Metric::beta_mse, Metric::sparsity_hitrate, Metric::test_mse,
                          Metric::fit_seconds}) {
        Matrix values(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(columns.size()));
        for (std::size_t d = 0; d < N; ++d) {
            for (std::size_t c = 0; c < columns.size(); ++c) {
                values(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(c)) =
                    metric_value(report.record(d, columns[c]), metric);
            }
        }
        MetricStatistics stats;
        stats.metric = metric;
        stats.ranks = build_rank_matrix(values, report.dataset_ids, names, higher_is_better(metric),
                                        config.equality_threshold);
        stats.best_worst = best_worst_counts(values, higher_is_better(metric), config.equality_threshold);
        if (N >= 2 && columns.size() >= 2) {
            stats.friedman = friedman_test(stats.ranks);
            if (has_reference) {
                stats.z_pvalues = pairwise_z_pvalues(stats.ranks, std::string(to_string(config.reference)));
                stats.holm = holm_stepdown(stats.z_pvalues, config.alpha);
            }
        }
        report.statistics.push_back(std::move(stats));
    }
    return report;
}

BenchmarkReport run_benchmark(const std::vector<GeneratedDataset>& datasets,
                              const BenchmarkConfig& config)
{
    require(!config.methods.empty(), "run_benchmark: no methods selected");
    const std::size_t K = config.methods.size();
    const std::size_t cells = datasets.size() * K;
    std::vector<MetricRecord> records(cells);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t cell = next++; cell < cells; cell = next++) {
            records[cell] = run_cell(datasets[cell / K], config.methods[cell % K], config);
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, config.parallelism));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, cells); ++w) pool.emplace_back(worker);
    }

    std::vector<std::string> ids;
    for (const auto& d : datasets) ids.push_back(d.spec.id());
    return summarize(std::move(ids), config.methods, std::move(records), config);
}

} // namespace sparsestep
