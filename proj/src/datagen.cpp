#include <sparsestep/datagen.hpp>

#include <cmath>
#include <cstdio>

#include <sparsestep/baselines.hpp>

namespace sparsestep {

namespace {

enum StreamTag : std::uint64_t {
    kStreamCorrelation = 1,
    kStreamMu = 2,
    kStreamDesign = 3,
    kStreamBeta = 4,
    kStreamNoise = 5,
};

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

std::string_view to_string(Correlation kind)
{
    switch (kind) {
    case Correlation::uncorrelated: return "uncorrelated";
    case Correlation::constant: return "constant";
    case Correlation::noise: return "noise";
    }
    return "unknown";
}

Correlation parse_correlation(std::string_view name)
{
    for (auto kind : kGridCorrelation) {
        if (to_string(kind) == name) return kind;
    }
    throw InvalidArgument("unknown correlation kind '" + std::string(name) +
                          "' (expected uncorrelated, constant or noise)");
}

std::string ScenarioSpec::id() const
{
    return "m" + std::to_string(m) + "_zeta" + std::to_string(zeta) + "_snr" + format_number(snr) +
           "_" + std::string(to_string(correlation));
}

Matrix make_correlation(Correlation kind, int m, Rng& rng)
{
    require(m >= 1, "make_correlation: m must be >= 1");
    Matrix sigma = Matrix::Identity(m, m);
    switch (kind) {
    case Correlation::uncorrelated:
        break;
    case Correlation::constant:
        sigma.setConstant(kConstantCorrelation);
        sigma.diagonal().setOnes();
        break;
    case Correlation::noise: {
        Matrix u(kNoiseDim, m);
        for (int i = 0; i < m; ++i) {
            double norm = 0.0;
            do {
                for (int d = 0; d < kNoiseDim; ++d) u(d, i) = rng.normal();
                norm = u.col(i).norm();
            } while (norm == 0.0);
            u.col(i) /= norm;
        }
        sigma = kNoiseEpsilon * (u.transpose() * u);
        sigma.diagonal().setOnes();
        break;
    }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-10) {
        throw NumericError("make_correlation: generated matrix is not positive semidefinite");
    }
    return sigma;
}

Matrix draw_design_raw(int n, const Vector& mu, const Matrix& sigma, Rng& rng)
{
    const Eigen::Index m = mu.size();
    require(n >= 1, "draw_design: n must be >= 1");
    require(sigma.rows() == m && sigma.cols() == m, "draw_design: sigma does not match mu");
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw NumericError("draw_design: Cholesky factorization of sigma failed");
    }
    const Matrix L = llt.matrixL();
    Matrix Z(n, m);
    for (int i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) Z(i, j) = rng.normal();
    }
    Matrix X = Z * L.transpose();
    X.rowwise() += mu.transpose();
    return X;
}

Matrix draw_design(int n, const Vector& mu, const Matrix& sigma, Rng& rng)
{
    Matrix raw = draw_design_raw(n, mu, sigma, rng);
    return fit_column_scaling(raw).apply(raw);
}

CoefficientVector make_beta(int m, int zeta, Rng& rng)
{
    require(m >= 1, "make_beta: m must be >= 1");
    require(zeta >= 0 && zeta <= 100, "make_beta: zeta must be a percentage");
    const int zeros = m * zeta / 100;
    CoefficientVector beta(m);
    for (int j = 0; j < m; ++j) beta[j] = rng.uniform(-1.0, 1.0);
    beta.tail(zeros).setZero();
    return beta;
}

std::pair<Vector, double> make_response(const Matrix& X, const CoefficientVector& beta, double snr,
                                        Rng& rng, Eigen::Index calibration_rows)
{
    require(X.cols() == beta.size(), "make_response: beta length must match X columns");
    require(std::isfinite(snr) && snr > 0.0, "make_response: snr must be > 0");
    const Eigen::Index n = X.rows();
    const Eigen::Index rows = calibration_rows < 0 ? n : calibration_rows;
    require(rows >= 1 && rows <= n, "make_response: calibration rows out of range");

    const Vector signal = X * beta;
    Vector e0(n);
    for (Eigen::Index i = 0; i < n; ++i) e0[i] = rng.normal();

    const double signal_energy = signal.head(rows).squaredNorm();
    if (!(signal_energy > 0.0)) {
        throw DataError("make_response: X*beta is zero, SNR is undefined");
    }
    const double noise_energy = e0.head(rows).squaredNorm();
    const double scale = std::sqrt(signal_energy / (snr * noise_energy));
    return {signal + scale * e0, scale};
}

double realized_snr(const Dataset& data, const CoefficientVector& beta)
{
    const Vector signal = data.X * beta;
    return signal.squaredNorm() / (data.y - signal).squaredNorm();
}

std::uint64_t scenario_seed(std::uint64_t base_seed, int m, int zeta, double snr, Correlation kind)
{
    std::uint64_t seed = derive_seed(base_seed, static_cast<std::uint64_t>(m));
    seed = derive_seed(seed, static_cast<std::uint64_t>(zeta));
    seed = derive_seed(seed, static_cast<std::uint64_t>(std::llround(snr * 1000.0)));
    return derive_seed(seed, static_cast<std::uint64_t>(kind));
}

std::vector<ScenarioSpec> generate_scenario_grid(int n_train, int n_test, std::uint64_t base_seed,
                                                 const std::vector<int>& ms,
                                                 const std::vector<int>& zetas,
                                                 const std::vector<double>& snrs,
                                                 const std::vector<Correlation>& kinds)
{
    std::vector<ScenarioSpec> grid;
    grid.reserve(ms.size() * zetas.size() * snrs.size() * kinds.size());
    for (int m : ms) {
        for (int zeta : zetas) {
            for (double snr : snrs) {
                for (Correlation kind : kinds) {
                    grid.push_back({m, zeta, snr, kind, n_train, n_test,
                                    scenario_seed(base_seed, m, zeta, snr, kind)});
                }
            }
        }
    }
    return grid;
}

GeneratedDataset generate_dataset(const ScenarioSpec& spec)
{
    require(spec.n_train >= 2 && spec.n_test >= 1, "generate_dataset: need n_train >= 2, n_test >= 1");
    require(spec.zero_count() < spec.m, "generate_dataset: all coefficients would be zero");
    const Rng root(spec.seed);

    GeneratedDataset out;
    out.spec = spec;
    Rng corr_rng = root.split(kStreamCorrelation);
    out.sigma = make_correlation(spec.correlation, spec.m, corr_rng);

    Rng mu_rng = root.split(kStreamMu);
    out.mu.resize(spec.m);
    for (int j = 0; j < spec.m; ++j) out.mu[j] = mu_rng.uniform();

    Rng design_rng = root.split(kStreamDesign);
    const int n = spec.n_train + spec.n_test;
    const Matrix raw = draw_design_raw(n, out.mu, out.sigma, design_rng);
    const StandardizationParams scaling = fit_column_scaling(raw.topRows(spec.n_train));
    const Matrix X = scaling.apply(raw);

    Rng beta_rng = root.split(kStreamBeta);
    out.beta_true = make_beta(spec.m, spec.zeta, beta_rng);

    Rng noise_rng = root.split(kStreamNoise);
    auto [y, scale] = make_response(X, out.beta_true, spec.snr, noise_rng, spec.n_train);
    out.noise_scale = scale;

    out.train = Dataset{X.topRows(spec.n_train), y.head(spec.n_train)};
    out.test = Dataset{X.bottomRows(spec.n_test), y.tail(spec.n_test)};
    return out;
}

} // namespace sparsestep
