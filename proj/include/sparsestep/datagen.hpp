#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <sparsestep/rng.hpp>
#include <sparsestep/types.hpp>

namespace sparsestep {

enum class Correlation { uncorrelated, constant, noise };

std::string_view to_string(Correlation kind);
/// Throws InvalidArgument on unknown names.
Correlation parse_correlation(std::string_view name);

/// Perturbation size and latent dimension of the noise-correlated scenario.
inline constexpr double kNoiseEpsilon = 0.01;
inline constexpr int kNoiseDim = 2;
/// Off-diagonal correlation of the constant scenario.
inline constexpr double kConstantCorrelation = 0.5;

/// One cell of the simulation grid.
struct ScenarioSpec
{
    int m = 10;
    int zeta = 0;       // percent of trailing zero coefficients
    double snr = 1.0;
    Correlation correlation = Correlation::uncorrelated;
    int n_train = 20000;
    int n_test = 10000;
    std::uint64_t seed = 0;

    /// floor(m * zeta / 100)
    int zero_count() const { return m * zeta / 100; }
    /// Stable directory-friendly name, e.g. "m10_zeta50_snr1_uncorrelated".
    std::string id() const;
};

struct GeneratedDataset
{
    ScenarioSpec spec;
    Dataset train;
    Dataset test;
    CoefficientVector beta_true;
    Matrix sigma;
    Vector mu;
    double noise_scale = 0.0;
    std::string rng_algorithm = Rng::algorithm_id;
    double noise_epsilon = kNoiseEpsilon;
    int noise_dim = kNoiseDim;
};

/// Correlation matrix for the requested scenario. The noise scenario is
/// I + eps * (u_i'u_j) off the diagonal with u_i uniform unit vectors in R^M.
/// Throws NumericError if the result is not PSD.
Matrix make_correlation(Correlation kind, int m, Rng& rng);

/// n independent rows from N(mu, sigma) using a Cholesky factor of sigma.
Matrix draw_design_raw(int n, const Vector& mu, const Matrix& sigma, Rng& rng);

/// draw_design_raw followed by column standardization.
Matrix draw_design(int n, const Vector& mu, const Matrix& sigma, Rng& rng);

/// Uniform [-1, 1] entries; the last floor(m * zeta / 100) are zero.
CoefficientVector make_beta(int m, int zeta, Rng& rng);

/// y = X beta + c * e0 with c chosen so that, over the first calibration_rows
/// rows (all rows when negative), (X beta)'(X beta) / e'e == snr.
/// Returns (y, c). Throws DataError when X beta is zero on those rows.
std::pair<Vector, double> make_response(const Matrix& X, const CoefficientVector& beta, double snr,
                                        Rng& rng, Eigen::Index calibration_rows = -1);

/// Realized beta'X'X beta / e'e of a dataset with known beta.
double realized_snr(const Dataset& data, const CoefficientVector& beta);

inline const std::vector<int> kGridM{10, 50, 100, 500};
inline const std::vector<int> kGridZeta{0, 25, 50, 75, 95};
inline const std::vector<double> kGridSnr{0.1, 1.0, 10.0};
inline const std::vector<Correlation> kGridCorrelation{Correlation::uncorrelated,
                                                       Correlation::constant, Correlation::noise};

/// Seed of one grid cell, derived from the base seed and grid coordinates.
std::uint64_t scenario_seed(std::uint64_t base_seed, int m, int zeta, double snr, Correlation kind);

/// Cross product of the given axes in (m, zeta, snr, correlation) order.
std::vector<ScenarioSpec> generate_scenario_grid(int n_train, int n_test, std::uint64_t base_seed,
                                                 const std::vector<int>& ms = kGridM,
                                                 const std::vector<int>& zetas = kGridZeta,
                                                 const std::vector<double>& snrs = kGridSnr,
                                                 const std::vector<Correlation>& kinds = kGridCorrelation);

/// Materialize one scenario. X is standardized with training-block
/// statistics and the same transform is applied to the test block. One noise
/// draw covers all rows; the noise scale is calibrated on the training block.
GeneratedDataset generate_dataset(const ScenarioSpec& spec);

} // namespace sparsestep
