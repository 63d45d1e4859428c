#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <sparsestep/benchmark.hpp>
#include <sparsestep/solver.hpp>

namespace sparsestep::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2, kNumericError = 3 };

/// Default output root; overridden by the SPARSESTEP_OUTPUT_ROOT environment variable.
std::string default_output_root();

struct GenerateOptions
{
    std::string out_dir;
    bool all = false;
    std::vector<int> m;
    std::vector<int> zeta;
    std::vector<double> snr;
    std::vector<std::string> corr;
    int n_train = 20000;
    int n_test = 10000;
    std::uint64_t seed = 1;
};

struct FitOptions
{
    std::string data_dir;
    std::string out_dir;
    std::string method = "sparsestep";
    double lambda = 1.0;
    bool cv = false;
    int folds = 10;
    int grid_size = 101;
    std::uint64_t cv_seed = 1;
    bool print = false;
    SolverSchedule schedule{};
};

struct BenchmarkOptions
{
    std::string data_root;
    std::string out_dir;
    std::vector<std::string> methods{"ols", "ridge", "lasso", "sparsestep"};
    int folds = 10;
    int grid_size = 101;
    std::uint64_t cv_seed = 1;
    int parallel = 1;
    double alpha = 0.05;
    SolverSchedule schedule{};
};

struct CurvesOptions
{
    std::string out_dir;
    std::vector<double> gamma_sq{0.3, 0.1, 0.05};
    double lambda = 1.0;
    int points = 401;
    double majorizer_gamma_sq = 0.1;
    std::vector<double> support_points{0.0, 0.25, 0.5};
};

int cmd_generate(const GenerateOptions& opts);
int cmd_fit(const FitOptions& opts);
int cmd_benchmark(const BenchmarkOptions& opts);
int cmd_curves(const CurvesOptions& opts);

/// Parse argv and dispatch; returns the process exit code.
int run(int argc, char** argv);

} // namespace sparsestep::cli
