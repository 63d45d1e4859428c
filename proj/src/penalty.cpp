#include <sparsestep/penalty.hpp>

#include <cmath>
#include <string>

namespace sparsestep {

PenaltyParams::PenaltyParams(double lambda, double gamma)
    : lambda_(lambda), gamma_(gamma)
{
    require(std::isfinite(lambda) && lambda >= 0.0, "penalty: lambda must be finite and >= 0");
    require(std::isfinite(gamma) && gamma > 0.0, "penalty: gamma must be finite and > 0");
}

std::size_t l0_norm(const CoefficientVector& beta, double tol)
{
    require(tol >= 0.0, "l0_norm: tolerance must be >= 0");
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (std::abs(beta[j]) > tol) ++count;
    }
    return count;
}

double lp_penalty(const CoefficientVector& beta, double p, double lambda)
{
    require(p > 0.0, "lp_penalty: p must be > 0");
    if (lambda == 0.0) return 0.0;
    double sum = 0.0;
    if (p == 1.0) {
        sum = beta.cwiseAbs().sum();
    } else if (p == 2.0) {
        sum = beta.squaredNorm();
    } else {
        for (Eigen::Index j = 0; j < beta.size(); ++j) {
            sum += std::pow(std::abs(beta[j]), p);
        }
    }
    return lambda * sum;
}

double sparsestep_penalty(double beta_j, const PenaltyParams& params)
{
    const double b2 = beta_j * beta_j;
    return params.lambda() * b2 / (b2 + params.gamma_sq());
}

double sparsestep_gradient(double beta_j, const PenaltyParams& params)
{
    const double g2 = params.gamma_sq();
    const double denom = beta_j * beta_j + g2;
    return params.lambda() * 2.0 * g2 * beta_j / (denom * denom);
}

double sparsestep_penalty_sum(const CoefficientVector& beta, const PenaltyParams& params)
{
    double sum = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        sum += sparsestep_penalty(beta[j], params);
    }
    return sum;
}

double residual_sum_squares(const Dataset& data, const CoefficientVector& beta)
{
    if (data.X.cols() != beta.size() || data.X.rows() != data.y.size()) {
        throw InvalidArgument("dimension mismatch: X is " + std::to_string(data.X.rows()) + "x" +
                              std::to_string(data.X.cols()) + ", y has " +
                              std::to_string(data.y.size()) + ", beta has " +
                              std::to_string(beta.size()));
    }
    return (data.y - data.X * beta).squaredNorm();
}

double sparsestep_loss(const Dataset& data, const CoefficientVector& beta,
                       const PenaltyParams& params)
{
    return residual_sum_squares(data, beta) + sparsestep_penalty_sum(beta, params);
}

} // namespace sparsestep
