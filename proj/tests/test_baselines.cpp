#include <doctest.h>

#include <sparsestep/baselines.hpp>
#include <sparsestep/penalty.hpp>
#include <sparsestep/solver.hpp>

#include "test_support.hpp"

using namespace sparsestep;
using namespace sparsestep::testing;

namespace {

double lasso_objective(const Dataset& d, const Vector& b, double lambda)
{
    return residual_sum_squares(d, b) + lp_penalty(b, 1.0, lambda);
}

Matrix orthonormal_columns(Rng& rng, int n, int m)
{
    Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, m));
    return qr.householderQ() * Matrix::Identity(n, m);
}

} // namespace

TEST_CASE("standardize uses population scaling")
{
    Dataset d{(Matrix(3, 2) << 1, 10, 2, 0, 3, 5).finished(), (Vector(3) << 1, 2, 3).finished()};
    const auto [s, params] = standardize(d);
    CHECK(s.X(0, 0) == doctest::Approx(-1.224745).epsilon(1e-6));
    CHECK(s.X(1, 0) == doctest::Approx(0.0));
    CHECK(s.X(2, 0) == doctest::Approx(1.224745).epsilon(1e-6));
    for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(s.X.col(j).mean()) < 1e-12);
        CHECK(s.X.col(j).squaredNorm() / 3 == doctest::Approx(1.0));
    }

    Dataset yd{(Matrix(4, 1) << 1, 2, 3, 4).finished(), (Vector(4) << 5, 5, 5, 9).finished()};
    CHECK(standardize(yd).first.y.isApprox((Vector(4) << -1, -1, -1, 3).finished()));
}

TEST_CASE("standardize is idempotent and invertible")
{
    Rng rng(8);
    Dataset raw{random_matrix(rng, 50, 4) * 3.0, random_vector(rng, 50)};
    raw.X.array() += 2.0;
    raw.y.array() += 7.0;
    const auto [s, params] = standardize(raw);
    const auto [again, p2] = standardize(s);
    CHECK((again.X - s.X).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((p2.column_scales.array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(p2.column_means.cwiseAbs().maxCoeff() < 1e-12);

    const Dataset back = params.invert(s);
    CHECK((back.X - raw.X).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.y - raw.y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("standardize rejects constant columns")
{
    Dataset d{(Matrix(3, 3) << 1, 4, 2, 2, 4, 3, 3, 4, 1).finished(), Vector::Zero(3)};
    try {
        standardize(d);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
    Dataset one{Matrix::Ones(1, 1), Vector::Ones(1)};
    CHECK_THROWS_AS(standardize(one), InvalidArgument);
}

TEST_CASE("ols_fit")
{
    const Vector y = (Vector(3) << 4, -1, 2).finished();
    CHECK(ols_fit(Dataset{Matrix::Identity(3, 3), y}).isApprox(y));

    Rng rng(9);
    const Matrix X = random_matrix(rng, 20, 4);
    const Vector truth = random_vector(rng, 4);
    CHECK(ols_fit(Dataset{X, X * truth}).isApprox(truth, 1e-10));

    const Dataset d{random_matrix(rng, 10, 3), random_vector(rng, 10)};
    const Vector b = ols_fit(d);
    CHECK((d.X.transpose() * (d.y - d.X * b)).norm() < 1e-8);

    Matrix dup = random_matrix(rng, 10, 2);
    dup.col(1) = 2.0 * dup.col(0);
    CHECK_THROWS_AS(ols_fit(Dataset{dup, random_vector(rng, 10)}), NumericError);
}

TEST_CASE("ridge_fit")
{
    Rng rng(10);
    const Dataset d = standardize(Dataset{random_matrix(rng, 60, 5), random_vector(rng, 60)}).first;
    CHECK(ridge_fit(d, 0.0).isApprox(ols_fit(d), 1e-12));
    CHECK(ridge_fit(d, 1e12).norm() < 1e-6);

    const double lambda = 2.5;
    const NormalEquations ne = NormalEquations::from(d);
    const MajorizerState identity{Vector::Ones(5), Vector::Zero(5), Vector::Zero(5), 1.0};
    CHECK(ridge_fit(d, lambda).isApprox(im_update(ne.gram, ne.xty, lambda, identity), 1e-12));

    const Matrix Q = orthonormal_columns(rng, 30, 4);
    const Dataset orth{Q, random_vector(rng, 30)};
    CHECK(ridge_fit(orth, lambda).isApprox(Q.transpose() * orth.y / (1 + lambda), 1e-10));

    CHECK_THROWS_AS(ridge_fit(d, -1.0), InvalidArgument);
}

TEST_CASE("lasso_fit on an orthonormal design is soft thresholding")
{
    Rng rng(12);
    const Matrix Q = orthonormal_columns(rng, 40, 6);
    const Dataset d{Q, 3.0 * random_vector(rng, 40)};
    const Vector z = Q.transpose() * d.y;
    for (double lambda : {0.1, 1.0, 3.0}) {
        const Vector b = lasso_fit(d, lambda);
        for (int j = 0; j < 6; ++j) {
            const double expected = soft_threshold(z[j], lambda / 2);
            CHECK(b[j] == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
            // scalar objective (b - z)^2 + lambda |b| minimized numerically on a fine grid
            double best = INFINITY, arg = 0;
            for (double t = -6; t <= 6; t += 1e-4) {
                const double v = (t - z[j]) * (t - z[j]) + lambda * std::abs(t);
                if (v < best) best = v, arg = t;
            }
            CHECK(std::abs(arg - expected) < 2e-4);
        }
    }
}

TEST_CASE("lasso_fit optimality")
{
    Rng rng(14);
    const Problem p = make_problem(rng.next_u64(), 120, 8, 3, 2.0, Correlation::constant);
    const NormalEquations ne = NormalEquations::from(p.data);

    CHECK(lasso_fit(p.data, 0.0).isApprox(ols_fit(p.data), 1e-6));
    CHECK((lasso_fit(p.data, 0.0) - ridge_fit(p.data, 0.0)).cwiseAbs().maxCoeff() < 1e-6);

    const double lambda_max = 2.0 * ne.xty.cwiseAbs().maxCoeff();
    CHECK(lasso_fit(p.data, lambda_max).isZero(0.0));
    CHECK(lasso_fit(p.data, 1.5 * lambda_max).isZero(0.0));
    CHECK_FALSE(lasso_fit(p.data, 0.9 * lambda_max).isZero(0.0));

    for (double lambda : {1.0, 10.0, 60.0}) {
        const Vector b = lasso_fit(p.data, lambda);
        // zero subgradient: grad of RSS is -2 X'(y - Xb)
        const Vector g = -2.0 * (ne.xty - ne.gram * b);
        for (int j = 0; j < 8; ++j) {
            if (b[j] != 0.0) {
                CHECK(std::abs(g[j] + lambda * (b[j] > 0 ? 1 : -1)) < 1e-6 * std::max(1.0, lambda) * 10);
            } else {
                CHECK(std::abs(g[j]) <= lambda + 1e-6);
            }
        }
        const double obj = lasso_objective(p.data, b, lambda);
        for (int j = 0; j < 8; ++j) {
            for (double step : {-1e-4, 1e-4}) {
                Vector q = b;
                q[j] += step;
                CHECK(lasso_objective(p.data, q, lambda) >= obj - 1e-8);
            }
        }
    }
}

TEST_CASE("lasso_fit reports non-convergence with the last iterate")
{
    const Problem p = make_problem(15, 100, 6, 0, 1.0, Correlation::constant);
    LassoOptions opts;
    opts.max_sweeps = 1;
    try {
        lasso_fit(p.data, 0.01, opts);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.last_iterate.size() == 6);
        CHECK_FALSE(e.last_iterate.isZero());
    }
    CHECK_THROWS_AS(lasso_fit(p.data, -1.0), InvalidArgument);
}
