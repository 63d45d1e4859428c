#pragma once

#include <sparsestep/linalg.hpp>
#include <sparsestep/types.hpp>

namespace sparsestep {

/// Column centering/scaling and response centering learned from one dataset.
/// Scales use the population convention sqrt(sum (x - mean)^2 / n).
struct StandardizationParams
{
    Vector column_means;
    Vector column_scales;
    double response_mean = 0.0;

    /// Apply the learned transform to another block (e.g. test rows).
    Dataset apply(const Dataset& data) const;
    Matrix apply(const Matrix& X) const;
    /// Undo apply().
    Dataset invert(const Dataset& standardized) const;
};

/// Standardize X columns to mean 0 / unit population variance, center y.
/// Throws DataError naming the first constant column.
std::pair<Dataset, StandardizationParams> standardize(const Dataset& data);

/// Column means and population scales only; X is returned standardized.
StandardizationParams fit_column_scaling(const Matrix& X);

CoefficientVector ols_fit(const Dataset& data);
CoefficientVector ols_fit(const NormalEquations& ne);

/// (X'X + lambda I)^-1 X'y.
CoefficientVector ridge_fit(const Dataset& data, double lambda);
CoefficientVector ridge_fit(const NormalEquations& ne, double lambda);

struct LassoOptions
{
    double tolerance = 1e-8;   // max absolute coefficient change per sweep
    int max_sweeps = 10000;
};

/// Raised when coordinate descent hits max_sweeps; carries the last iterate.
class ConvergenceError : public NumericError
{
public:
    ConvergenceError(const std::string& msg, CoefficientVector last)
        : NumericError(msg), last_iterate(std::move(last)) {}

    CoefficientVector last_iterate;
};

/// Minimizes ||y - X beta||^2 + lambda * sum |beta_j| by cyclic coordinate
/// descent on the Gram matrix. Note: no 1/(2n) factor on the loss.
CoefficientVector lasso_fit(const Dataset& data, double lambda, const LassoOptions& opts = {});
CoefficientVector lasso_fit(const NormalEquations& ne, double lambda, const LassoOptions& opts = {});

/// sign(z) * max(|z| - t, 0)
inline double soft_threshold(double z, double t)
{
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

} // namespace sparsestep
