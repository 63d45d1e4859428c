#pragma once

#include <sparsestep/types.hpp>

namespace sparsestep {

/// Solve A x = b for symmetric positive definite A via Cholesky.
///
/// Throws NumericError when a pivot is non-positive or when a column is
/// numerically dependent on the preceding ones (pivot ratio L_jj^2 / A_jj
/// below 1e-12). The ratio test is invariant to diagonal scaling, so very
/// large diagonal penalties do not trigger it.
Vector spd_solve(const Matrix& A, const Vector& b);

/// Cached X'X and X'y for one dataset.
struct NormalEquations
{
    Matrix gram;
    Vector xty;

    static NormalEquations from(const Dataset& data);
};

} // namespace sparsestep
