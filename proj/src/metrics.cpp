#include <sparsestep/metrics.hpp>

#include <cmath>
#include <string>

namespace sparsestep {

namespace {
void check_lengths(const char* what, Eigen::Index a, Eigen::Index b)
{
    if (a != b || a == 0) {
        throw InvalidArgument(std::string(what) + ": length mismatch or empty (" + std::to_string(a) +
                              " vs " + std::to_string(b) + ")");
    }
}
} // namespace

double beta_mse(const CoefficientVector& estimate, const CoefficientVector& truth)
{
    check_lengths("beta_mse", estimate.size(), truth.size());
    return (estimate - truth).squaredNorm() / static_cast<double>(truth.size());
}

double sparsity_hitrate(const CoefficientVector& estimate, const CoefficientVector& truth, double tol)
{
    check_lengths("sparsity_hitrate", estimate.size(), truth.size());
    Eigen::Index hits = 0;
    for (Eigen::Index j = 0; j < truth.size(); ++j) {
        const bool est_zero = std::abs(estimate[j]) <= tol;
        const bool true_zero = truth[j] == 0.0;
        if (est_zero == true_zero) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double test_mse(const Vector& y_pred, const Vector& y_true)
{
    check_lengths("test_mse", y_pred.size(), y_true.size());
    return (y_pred - y_true).squaredNorm() / static_cast<double>(y_true.size());
}

} // namespace sparsestep
