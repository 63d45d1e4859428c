#include <sparsestep/linalg.hpp>

#include <cmath>
#include <string>

namespace sparsestep {

namespace {
constexpr double kPivotRatioFloor = 1e-12;
}

Vector spd_solve(const Matrix& A, const Vector& b)
{
    if (A.rows() != A.cols() || A.rows() != b.size()) {
        throw InvalidArgument("spd_solve: expected square A matching b, got " +
                              std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                              " and " + std::to_string(b.size()));
    }
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success) {
        throw NumericError("spd_solve: Cholesky factorization failed (matrix not positive definite)");
    }
    const auto L = llt.matrixLLT();
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
        const double pivot = L(j, j) * L(j, j);
        if (!(A(j, j) > 0.0) || !(pivot / A(j, j) > kPivotRatioFloor)) {
            throw NumericError("spd_solve: matrix is numerically singular at column " +
                               std::to_string(j));
        }
    }
    Vector x = llt.solve(b);
    if (!x.allFinite()) throw NumericError("spd_solve: non-finite solution");
    return x;
}

NormalEquations NormalEquations::from(const Dataset& data)
{
    require(data.X.rows() == data.y.size(), "normal equations: X rows must match y length");
    NormalEquations ne;
    ne.gram = Matrix(data.X.cols(), data.X.cols());
    ne.gram.setZero();
    ne.gram.selfadjointView<Eigen::Lower>().rankUpdate(data.X.transpose());
    ne.gram.triangularView<Eigen::StrictlyUpper>() = ne.gram.transpose();
    ne.xty = data.X.transpose() * data.y;
    return ne;
}

} // namespace sparsestep
