#pragma once

#include <sparsestep/types.hpp>

namespace sparsestep {

/// (1/m) sum (estimate_j - truth_j)^2
double beta_mse(const CoefficientVector& estimate, const CoefficientVector& truth);

/// Fraction of coefficients whose zero/nonzero status matches the truth.
/// An estimate counts as zero when |estimate_j| <= tol; truth zeros are exact.
double sparsity_hitrate(const CoefficientVector& estimate, const CoefficientVector& truth,
                        double tol = 0.0);

/// (1/n) sum (pred_i - truth_i)^2
double test_mse(const Vector& y_pred, const Vector& y_true);

} // namespace sparsestep
