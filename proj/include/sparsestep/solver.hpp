#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <vector>

#include <sparsestep/linalg.hpp>
#include <sparsestep/types.hpp>

namespace sparsestep {

/// Hyperparameters of the annealed SparseStep procedure. The defaults are
/// the values used in the original simulation study.
struct SolverSchedule
{
    double gamma0 = 1e6;
    double gamma_stop = 1e-8;
    double gamma_step = 2.0;
    int t_max = 2;
    double epsilon = 1e-7;
    /// Starting coefficients. Empty means the zero vector.
    CoefficientVector beta0;
    double lambda = 1.0;
    /// Record the loss after every update. Costs one O(nm) residual per update.
    bool record_trace = true;

    /// Throws InvalidArgument when the schedule cannot run on m columns.
    void validate(Eigen::Index m) const;

    /// Number of gamma levels visited by the annealing loop.
    std::size_t gamma_levels() const;
};

/// Quadratic majorizer of the penalty sum at supporting point alpha.
struct MajorizerState
{
    Vector omega_diag;              // gamma^2 / (alpha_j^2 + gamma^2)^2
    Vector delta;                   // alpha_j^2 / gamma
    CoefficientVector support_point;
    double gamma = 0.0;
};

struct TraceEntry
{
    double gamma;
    int iteration;  // 0 is the loss at the start of the gamma level
    double loss;
};

struct FitResult
{
    CoefficientVector beta;
    std::vector<Eigen::Index> support;
    /// Loss at the final gamma level, evaluated on the thresholded beta.
    double final_loss = 0.0;
    std::vector<TraceEntry> descent_trace;
    std::chrono::duration<double> wall_time{0.0};
};

MajorizerState build_omega(const CoefficientVector& alpha, double gamma);

/// g(x, y) = (gamma^2 x^2 + y^4) / (y^2 + gamma^2)^2, the unit-lambda
/// majorizer of x^2 / (x^2 + gamma^2) touching it at x = y.
double majorizer_value(double x, double y, double gamma);

/// One majorization step: beta = (X'X + lambda * Omega)^-1 X'y.
CoefficientVector im_update(const Matrix& gram, const Vector& xty, double lambda,
                            const MajorizerState& state);

/// Zero every entry with |beta_j| < epsilon (strict).
CoefficientVector threshold(const CoefficientVector& beta, double epsilon);

/// Called after every update with (gamma, iteration in 1..t_max, beta).
using IterateObserver = std::function<void(double, int, const CoefficientVector&)>;

FitResult sparsestep_fit(const Dataset& data, const SolverSchedule& schedule,
                         const IterateObserver& observer = {});

/// Same as above with X'X and X'y supplied by the caller.
FitResult sparsestep_fit(const Dataset& data, const NormalEquations& cache,
                         const SolverSchedule& schedule, const IterateObserver& observer = {});

} // namespace sparsestep
