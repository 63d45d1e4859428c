#include <doctest.h>

#include <set>

#include <sparsestep/datagen.hpp>

#include "test_support.hpp"

using namespace sparsestep;
using namespace sparsestep::testing;

namespace {

/// Smallest eigenvalue of a symmetric matrix by power iteration on (c I - A).
double min_eigenvalue_power(const Matrix& A)
{
    const double shift = A.cwiseAbs().rowwise().sum().maxCoeff();  // Gershgorin bound
    const Matrix B = shift * Matrix::Identity(A.rows(), A.cols()) - A;
    Vector v = Vector::Ones(A.rows()).normalized();
    double mu = 0.0;
    for (int it = 0; it < 5000; ++it) {
        Vector w = B * v;
        mu = v.dot(w);
        v = w.normalized();
    }
    return shift - mu;
}

double sample_correlation(const Matrix& X, int a, int b)
{
    const Vector xa = X.col(a).array() - X.col(a).mean();
    const Vector xb = X.col(b).array() - X.col(b).mean();
    return xa.dot(xb) / (xa.norm() * xb.norm());
}

} // namespace

TEST_CASE("rng is deterministic and splits into distinct streams")
{
    Rng a(99), b(99);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c = Rng(99).split(1), d = Rng(99).split(2);
    CHECK(c.next_u64() != d.next_u64());
    Rng u(5);
    double sum = 0, sumsq = 0;
    for (int i = 0; i < 200000; ++i) {
        const double x = u.normal();
        sum += x;
        sumsq += x * x;
    }
    CHECK(std::abs(sum / 200000) < 0.01);
    CHECK(std::abs(sumsq / 200000 - 1.0) < 0.02);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        CHECK(u.below(7) < 7);
    }
}

TEST_CASE("make_correlation")
{
    Rng rng(1);
    CHECK(make_correlation(Correlation::uncorrelated, 3, rng) == Matrix::Identity(3, 3));
    const Matrix c = make_correlation(Correlation::constant, 2, rng);
    CHECK(c == (Matrix(2, 2) << 1, 0.5, 0.5, 1).finished());

    const Matrix n = make_correlation(Correlation::noise, 50, rng);
    CHECK(n.isApprox(n.transpose(), 0.0));
    CHECK(n.diagonal().isOnes(0.0));
    Matrix off = n;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() <= 0.01 + 1e-15);
    CHECK(off.cwiseAbs().maxCoeff() > 0.0);
    CHECK(min_eigenvalue_power(n) > 0.0);

    for (auto kind : kGridCorrelation) {
        for (int m : {1, 10, 100}) {
            const Matrix s = make_correlation(kind, m, rng);
            CHECK(s.diagonal().isOnes(0.0));
            CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(s).eigenvalues().minCoeff() >= -1e-10);
        }
    }
    CHECK(parse_correlation("noise") == Correlation::noise);
    CHECK_THROWS_AS(parse_correlation("banded"), InvalidArgument);
}

TEST_CASE("draw_design sample correlations")
{
    Rng rng(2);
    const Vector mu = Vector::Constant(3, 0.4);
    const Matrix Xi = draw_design(20000, mu, Matrix::Identity(3, 3), rng);
    const Matrix Xc = draw_design(20000, mu, make_correlation(Correlation::constant, 3, rng), rng);
    for (int a = 0; a < 3; ++a) {
        CHECK(std::abs(Xi.col(a).mean()) < 1e-10);
        CHECK(Xi.col(a).squaredNorm() / 20000 == doctest::Approx(1.0));
        for (int b = a + 1; b < 3; ++b) {
            CHECK(std::abs(sample_correlation(Xi, a, b)) < 0.05);
            CHECK(std::abs(sample_correlation(Xc, a, b) - 0.5) < 0.05);
        }
    }
    Rng r1(77), r2(77);
    CHECK(draw_design(30, mu, Matrix::Identity(3, 3), r1) == draw_design(30, mu, Matrix::Identity(3, 3), r2));
    const Matrix bad = (Matrix(2, 2) << 1, 2, 2, 1).finished();
    CHECK_THROWS_AS(draw_design(5, Vector::Zero(2), bad, rng), NumericError);
}

TEST_CASE("make_beta")
{
    Rng rng(3);
    const Vector b0 = make_beta(20, 0, rng);
    CHECK((b0.array() != 0.0).all());
    const Vector b95 = make_beta(10, 95, rng);
    CHECK(b95.tail(9).isZero(0.0));
    CHECK(b95[0] != 0.0);
    const Vector b50 = make_beta(4, 50, rng);
    CHECK(b50[2] == 0.0);
    CHECK(b50[3] == 0.0);
    for (int m : {10, 50, 100, 500}) {
        for (int zeta : kGridZeta) {
            const Vector b = make_beta(m, zeta, rng);
            const int z = m * zeta / 100;
            CHECK(b.tail(z).isZero(0.0));
            CHECK(b.cwiseAbs().maxCoeff() <= 1.0);
            CHECK((b.head(m - z).array() != 0.0).all());
        }
    }
}

TEST_CASE("make_response hits the requested SNR exactly")
{
    Rng rng(4);
    const Matrix X = random_matrix(rng, 200, 5);
    const Vector beta = (Vector(5) << 0.5, -0.2, 0, 0.9, 0).finished();
    for (double snr : {0.1, 1.0, 10.0, 3.7}) {
        const auto [y, scale] = make_response(X, beta, snr, rng);
        CHECK(std::abs(realized_snr(Dataset{X, y}, beta) / snr - 1.0) < 1e-10);
        CHECK(scale > 0.0);
    }
    Rng a(5), b(5);
    const double hi = make_response(X, beta, 10.0, a).second;
    const double lo = make_response(X, beta, 0.1, b).second;
    CHECK(lo / hi == doctest::Approx(10.0).epsilon(1e-12));

    // single-column reduction
    Matrix Xu = random_matrix(rng, 50, 3);
    Xu.col(0).normalize();
    const Vector e1 = Vector::Unit(3, 0);
    Rng c(6);
    const auto [y1, s1] = make_response(Xu, e1, 2.0, c);
    const Vector noise = y1 - Xu.col(0);
    CHECK((Xu * e1).squaredNorm() == doctest::Approx(1.0));
    CHECK(1.0 / noise.squaredNorm() == doctest::Approx(2.0));

    CHECK_THROWS_AS(make_response(X, Vector::Zero(5), 1.0, rng), DataError);
    CHECK_THROWS_AS(make_response(X, beta, 0.0, rng), InvalidArgument);
}

TEST_CASE("scenario grid")
{
    const auto grid = generate_scenario_grid(20000, 10000, 42);
    CHECK(grid.size() == 180);
    std::set<std::uint64_t> seeds;
    std::set<std::string> ids;
    for (const auto& s : grid) {
        seeds.insert(s.seed);
        ids.insert(s.id());
        CHECK(s.n_train == 20000);
        CHECK(s.n_test == 10000);
    }
    CHECK(seeds.size() == 180);
    CHECK(ids.size() == 180);
    const auto again = generate_scenario_grid(20000, 10000, 42);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(grid[i].seed == again[i].seed);
        CHECK(grid[i].id() == again[i].id());
    }
    CHECK(generate_scenario_grid(10, 10, 43)[0].seed != grid[0].seed);
    CHECK(grid[0].id() == "m10_zeta0_snr0.1_uncorrelated");
}

TEST_CASE("generate_dataset invariants and determinism")
{
    const auto grid = generate_scenario_grid(300, 100, 7, {10, 50}, {0, 95}, {0.1, 10.0});
    for (const auto& spec : grid) {
        const GeneratedDataset d = generate_dataset(spec);
        CHECK(d.train.X.rows() == 300);
        CHECK(d.test.X.rows() == 100);
        CHECK(d.beta_true.tail(spec.zero_count()).isZero(0.0));
        CHECK(std::abs(realized_snr(d.train, d.beta_true) / spec.snr - 1.0) <= 1e-10);
        CHECK(d.train.X.colwise().mean().cwiseAbs().maxCoeff() < 1e-10);
        CHECK(d.sigma.diagonal().isOnes(0.0));
        // test block shares beta and noise scale; its columns are not re-centered
        const Vector test_noise = d.test.y - d.test.X * d.beta_true;
        CHECK(test_noise.norm() / std::sqrt(100.0) == doctest::Approx(d.noise_scale).epsilon(0.3));
    }
    const GeneratedDataset a = generate_dataset(grid[3]);
    const GeneratedDataset b = generate_dataset(grid[3]);
    CHECK(a.train.X == b.train.X);
    CHECK(a.train.y == b.train.y);
    CHECK(a.test.y == b.test.y);
    CHECK(a.beta_true == b.beta_true);
}
