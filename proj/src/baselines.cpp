#include <sparsestep/baselines.hpp>

#include <cmath>
#include <string>

namespace sparsestep {

StandardizationParams fit_column_scaling(const Matrix& X)
{
    const Eigen::Index n = X.rows();
    require(n >= 2, "standardize: need at least 2 rows");
    StandardizationParams params;
    params.column_means = X.colwise().mean().transpose();
    params.column_scales.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double ssq = (X.col(j).array() - params.column_means[j]).square().sum();
        const double scale = std::sqrt(ssq / static_cast<double>(n));
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw DataError("standardize: column " + std::to_string(j) + " is constant");
        }
        params.column_scales[j] = scale;
    }
    return params;
}

std::pair<Dataset, StandardizationParams> standardize(const Dataset& data)
{
    require(data.X.rows() == data.y.size(), "standardize: X rows must match y length");
    StandardizationParams params = fit_column_scaling(data.X);
    params.response_mean = data.y.mean();
    return {params.apply(data), params};
}

Matrix StandardizationParams::apply(const Matrix& X) const
{
    require(X.cols() == column_means.size(), "standardize: column count mismatch");
    Matrix out = X.rowwise() - column_means.transpose();
    out.array().rowwise() /= column_scales.transpose().array();
    return out;
}

Dataset StandardizationParams::apply(const Dataset& data) const
{
    Dataset out{apply(data.X), data.y.array() - response_mean};
    return out;
}

Dataset StandardizationParams::invert(const Dataset& standardized) const
{
    Dataset out;
    out.X = standardized.X;
    out.X.array().rowwise() *= column_scales.transpose().array();
    out.X.rowwise() += column_means.transpose();
    out.y = standardized.y.array() + response_mean;
    return out;
}

CoefficientVector ols_fit(const NormalEquations& ne)
{
    try {
        return spd_solve(ne.gram, ne.xty);
    } catch (const NumericError& e) {
        throw NumericError(std::string("ols_fit: X'X is singular (") + e.what() + ")");
    }
}

CoefficientVector ols_fit(const Dataset& data)
{
    return ols_fit(NormalEquations::from(data));
}

CoefficientVector ridge_fit(const NormalEquations& ne, double lambda)
{
    require(std::isfinite(lambda) && lambda >= 0.0, "ridge_fit: lambda must be >= 0");
    Matrix system = ne.gram;
    system.diagonal().array() += lambda;
    try {
        return spd_solve(system, ne.xty);
    } catch (const NumericError& e) {
        throw NumericError(std::string("ridge_fit: X'X + lambda*I is singular (") + e.what() + ")");
    }
}

CoefficientVector ridge_fit(const Dataset& data, double lambda)
{
    return ridge_fit(NormalEquations::from(data), lambda);
}

CoefficientVector lasso_fit(const NormalEquations& ne, double lambda, const LassoOptions& opts)
{
    require(std::isfinite(lambda) && lambda >= 0.0, "lasso_fit: lambda must be >= 0");
    const Eigen::Index m = ne.xty.size();
    const double half_lambda = 0.5 * lambda;
    CoefficientVector beta = Vector::Zero(m);
    // grad = X'y - X'X beta, kept in sync with beta
    Vector grad = ne.xty;

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            const double gjj = ne.gram(j, j);
            const double old = beta[j];
            const double next = gjj > 0.0 ? soft_threshold(grad[j] + gjj * old, half_lambda) / gjj : 0.0;
            const double diff = next - old;
            if (diff != 0.0) {
                beta[j] = next;
                grad.noalias() -= ne.gram.col(j) * diff;
                max_change = std::max(max_change, std::abs(diff));
            }
        }
        if (max_change < opts.tolerance) return beta;
    }
    throw ConvergenceError("lasso_fit: no convergence after " + std::to_string(opts.max_sweeps) +
                               " sweeps",
                           beta);
}

CoefficientVector lasso_fit(const Dataset& data, double lambda, const LassoOptions& opts)
{
    return lasso_fit(NormalEquations::from(data), lambda, opts);
}

} // namespace sparsestep
