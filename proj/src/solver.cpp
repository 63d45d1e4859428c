#include <sparsestep/solver.hpp>

#include <cmath>
#include <string>

#include <sparsestep/penalty.hpp>

namespace sparsestep {

void SolverSchedule::validate(Eigen::Index m) const
{
    require(std::isfinite(gamma0) && std::isfinite(gamma_stop),
            "schedule: gamma0 and gamma_stop must be finite");
    require(gamma_stop > 0.0, "schedule: gamma_stop must be > 0");
    require(gamma0 > gamma_stop, "schedule: gamma0 must exceed gamma_stop");
    require(std::isfinite(gamma_step) && gamma_step > 1.0, "schedule: gamma_step must be > 1");
    require(t_max >= 1, "schedule: t_max must be >= 1");
    require(epsilon >= 0.0, "schedule: epsilon must be >= 0");
    require(std::isfinite(lambda) && lambda >= 0.0, "schedule: lambda must be finite and >= 0");
    require(beta0.size() == 0 || beta0.size() == m,
            "schedule: beta0 has length " + std::to_string(beta0.size()) + ", expected " +
                std::to_string(m));
}

std::size_t SolverSchedule::gamma_levels() const
{
    std::size_t levels = 0;
    for (double gamma = gamma0; gamma > gamma_stop; gamma /= gamma_step) ++levels;
    return levels;
}

MajorizerState build_omega(const CoefficientVector& alpha, double gamma)
{
    require(std::isfinite(gamma) && gamma > 0.0, "build_omega: gamma must be > 0");
    const double g2 = gamma * gamma;
    MajorizerState state;
    state.gamma = gamma;
    state.support_point = alpha;
    state.omega_diag.resize(alpha.size());
    state.delta.resize(alpha.size());
    for (Eigen::Index j = 0; j < alpha.size(); ++j) {
        const double a2 = alpha[j] * alpha[j];
        const double denom = a2 + g2;
        state.omega_diag[j] = g2 / (denom * denom);
        state.delta[j] = a2 / gamma;
    }
    return state;
}

double majorizer_value(double x, double y, double gamma)
{
    require(gamma > 0.0, "majorizer_value: gamma must be > 0");
    const double g2 = gamma * gamma;
    const double y2 = y * y;
    const double denom = y2 + g2;
    return (g2 * x * x + y2 * y2) / (denom * denom);
}

CoefficientVector im_update(const Matrix& gram, const Vector& xty, double lambda,
                            const MajorizerState& state)
{
    require(gram.rows() == gram.cols() && gram.rows() == xty.size() &&
                gram.rows() == state.omega_diag.size(),
            "im_update: dimension mismatch between X'X, X'y and Omega");
    Matrix system = gram;
    if (lambda != 0.0) system.diagonal() += lambda * state.omega_diag;
    try {
        return spd_solve(system, xty);
    } catch (const NumericError& e) {
        throw NumericError(std::string("im_update: X'X + lambda*Omega is singular or indefinite (") +
                           e.what() + ")");
    }
}

CoefficientVector threshold(const CoefficientVector& beta, double epsilon)
{
    CoefficientVector out = beta;
    for (Eigen::Index j = 0; j < out.size(); ++j) {
        if (std::abs(out[j]) < epsilon) out[j] = 0.0;
    }
    return out;
}

FitResult sparsestep_fit(const Dataset& data, const SolverSchedule& schedule,
                         const IterateObserver& observer)
{
    require(data.rows() >= 1 && data.cols() >= 1, "sparsestep_fit: empty dataset");
    return sparsestep_fit(data, NormalEquations::from(data), schedule, observer);
}

FitResult sparsestep_fit(const Dataset& data, const NormalEquations& cache,
                         const SolverSchedule& schedule, const IterateObserver& observer)
{
    const auto start = std::chrono::steady_clock::now();
    const Eigen::Index m = data.cols();
    require(data.rows() >= 1 && m >= 1, "sparsestep_fit: empty dataset");
    require(data.y.size() == data.rows(), "sparsestep_fit: y length must match X rows");
    require(cache.gram.rows() == m && cache.xty.size() == m,
            "sparsestep_fit: normal equations do not match dataset");
    schedule.validate(m);

    FitResult result;
    CoefficientVector beta = schedule.beta0.size() == m ? schedule.beta0 : Vector::Zero(m);
    if (schedule.record_trace) {
        result.descent_trace.reserve(schedule.gamma_levels() *
                                     static_cast<std::size_t>(schedule.t_max + 1));
    }

    double gamma = schedule.gamma0;
    double last_gamma = gamma;
    while (gamma > schedule.gamma_stop) {
        if (schedule.record_trace) {
            result.descent_trace.push_back(
                {gamma, 0, sparsestep_loss(data, beta, PenaltyParams(schedule.lambda, gamma))});
        }
        for (int t = 1; t <= schedule.t_max; ++t) {
            const MajorizerState state = build_omega(beta, gamma);
            beta = im_update(cache.gram, cache.xty, schedule.lambda, state);
            if (schedule.record_trace) {
                result.descent_trace.push_back(
                    {gamma, t, sparsestep_loss(data, beta, PenaltyParams(schedule.lambda, gamma))});
            }
            if (observer) observer(gamma, t, beta);
        }
        last_gamma = gamma;
        gamma /= schedule.gamma_step;
    }

    result.beta = threshold(beta, schedule.epsilon);
    for (Eigen::Index j = 0; j < m; ++j) {
        if (result.beta[j] != 0.0) result.support.push_back(j);
    }
    result.final_loss = sparsestep_loss(data, result.beta, PenaltyParams(schedule.lambda, last_gamma));
    result.wall_time = std::chrono::steady_clock::now() - start;
    return result;
}

} // namespace sparsestep
