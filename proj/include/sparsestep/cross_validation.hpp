#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <sparsestep/solver.hpp>
#include <sparsestep/types.hpp>

namespace sparsestep {

enum class Method { ols, ridge, lasso, sparsestep };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
/// OLS has no regularization parameter.
inline bool is_penalized(Method method) { return method != Method::ols; }

/// count log2-equally spaced values from 2^lo_exp to 2^hi_exp inclusive.
std::vector<double> log2_lambda_grid(int count = 101, double lo_exp = -15.0, double hi_exp = 15.0);

/// Fit one method on already standardized data. The schedule is only used
/// for SparseStep (its lambda field is overridden).
CoefficientVector fit_method(Method method, const Dataset& data, const NormalEquations& ne,
                             double lambda, const SolverSchedule& schedule = {});

/// Shuffled partition of 0..n-1 into k folds whose sizes differ by at most 1.
/// Indices inside a fold are sorted.
std::vector<std::vector<Eigen::Index>> kfold_splits(Eigen::Index n, int k, std::uint64_t seed);

struct CvResult
{
    double best_lambda = 0.0;
    std::vector<double> lambdas;
    /// Mean validation MSE per lambda; NaN where any fold fit failed.
    std::vector<double> mean_mse;
    std::vector<bool> valid;
};

/// k-fold grid search. Each training fold is standardized and its transform
/// is applied to the validation fold. The smallest mean MSE wins; exact ties
/// go to the larger lambda. Unpenalized methods evaluate only lambda = 0.
/// Throws NumericError if every lambda fails.
CvResult cv_grid_search(Method method, const Dataset& data, const std::vector<double>& lambda_grid,
                        int k, std::uint64_t seed, const SolverSchedule& schedule = {});

} // namespace sparsestep
