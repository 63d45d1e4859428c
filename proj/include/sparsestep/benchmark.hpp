#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <sparsestep/cross_validation.hpp>
#include <sparsestep/datagen.hpp>
#include <sparsestep/ranking.hpp>
#include <sparsestep/solver.hpp>

namespace sparsestep {

struct BenchmarkConfig
{
    std::vector<Method> methods{Method::ols, Method::ridge, Method::lasso, Method::sparsestep};
    std::vector<double> lambda_grid = log2_lambda_grid();
    int folds = 10;
    std::uint64_t cv_seed = 1;
    SolverSchedule schedule{};
    int parallelism = 1;
    Method reference = Method::sparsestep;
    double alpha = 0.05;
    double equality_threshold = kEqualityThreshold;
};

struct MetricRecord
{
    std::string dataset_id;
    Method method = Method::ols;
    double beta_mse = 0.0;
    double sparsity_hitrate = 0.0;
    double test_mse = 0.0;
    double fit_seconds = 0.0;
    double chosen_lambda = 0.0;
    CoefficientVector beta;
    bool ok = true;
    std::string error;
};

/// Metric identifiers used for rank tables and statistics.
enum class Metric { beta_mse, sparsity_hitrate, test_mse, fit_seconds };

std::string_view to_string(Metric metric);
bool higher_is_better(Metric metric);
double metric_value(const MetricRecord& rec, Metric metric);

/// Rank-based comparison of the methods on one metric.
struct MetricStatistics
{
    Metric metric = Metric::beta_mse;
    RankMatrix ranks;
    std::optional<FriedmanResult> friedman;
    std::vector<std::pair<std::string, double>> z_pvalues;
    std::optional<HolmResult> holm;
    std::vector<BestWorst> best_worst;
};

struct BenchmarkReport
{
    std::vector<std::string> dataset_ids;
    std::vector<Method> methods;
    /// records[d * methods.size() + j]
    std::vector<MetricRecord> records;
    /// Methods with no failed cell; the only columns that are ranked.
    std::vector<Method> complete_methods;
    std::vector<MetricStatistics> statistics;

    const MetricRecord& record(std::size_t dataset, std::size_t method) const
    {
        return records[dataset * methods.size() + method];
    }
};

/// CV seed shared by every method on one dataset.
std::uint64_t dataset_cv_seed(std::uint64_t cv_seed, const ScenarioSpec& spec);

/// CV-select lambda on the training block, refit on the full training block
/// and evaluate on the test block. Failures are captured in the record.
MetricRecord run_cell(const GeneratedDataset& data, Method method, const BenchmarkConfig& config);

/// Compute statistics for the given records (datasets x methods).
BenchmarkReport summarize(std::vector<std::string> dataset_ids, std::vector<Method> methods,
                          std::vector<MetricRecord> records, const BenchmarkConfig& config);

/// Run every (dataset, method) cell with up to config.parallelism workers;
/// aggregation order is fixed regardless of parallelism.
BenchmarkReport run_benchmark(const std::vector<GeneratedDataset>& datasets,
                              const BenchmarkConfig& config);

} // namespace sparsestep
