#pragma once

#include <cstddef>

#include <sparsestep/types.hpp>

namespace sparsestep {

/// Regularization weight and approximation sharpness of the SparseStep
/// penalty. gamma is stored unsquared; formulas square it.
class PenaltyParams
{
public:
    PenaltyParams(double lambda, double gamma);

    double lambda() const { return lambda_; }
    double gamma() const { return gamma_; }
    double gamma_sq() const { return gamma_ * gamma_; }

private:
    double lambda_;
    double gamma_;
};

/// Number of entries with |beta_j| > tol. tol = 0 is the exact counting norm.
std::size_t l0_norm(const CoefficientVector& beta, double tol = 0.0);

/// lambda * sum_j |beta_j|^p. p = 2 is ridge, p = 1 is lasso.
double lp_penalty(const CoefficientVector& beta, double p, double lambda);

/// lambda * b^2 / (b^2 + gamma^2); lies in [0, lambda).
double sparsestep_penalty(double beta_j, const PenaltyParams& params);

/// Derivative of sparsestep_penalty with respect to beta_j.
double sparsestep_gradient(double beta_j, const PenaltyParams& params);

/// Sum of sparsestep_penalty over all coefficients.
double sparsestep_penalty_sum(const CoefficientVector& beta, const PenaltyParams& params);

/// Residual sum of squares ||y - X beta||^2.
double residual_sum_squares(const Dataset& data, const CoefficientVector& beta);

/// ||y - X beta||^2 + sum_j P(beta_j).
double sparsestep_loss(const Dataset& data, const CoefficientVector& beta,
                       const PenaltyParams& params);

} // namespace sparsestep
