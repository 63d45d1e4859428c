#include <sparsestep/ranking.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>

namespace sparsestep {

std::vector<double> fractional_ranks(const std::vector<double>& values, double equality_threshold)
{
    const std::size_t k = values.size();
    require(k >= 1, "fractional_ranks: need at least one value");
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(k);
    std::size_t start = 0;
    while (start < k) {
        std::size_t end = start + 1;
        while (end < k && values[order[end]] - values[order[end - 1]] < equality_threshold) ++end;
        // positions start+1 .. end share their mean
        const double shared = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t i = start; i < end; ++i) ranks[order[i]] = shared;
        start = end;
    }
    return ranks;
}

RankMatrix build_rank_matrix(const Matrix& values, std::vector<std::string> datasets,
                             std::vector<std::string> methods, bool higher_is_better,
                             double equality_threshold)
{
    require(static_cast<Eigen::Index>(datasets.size()) == values.rows() &&
                static_cast<Eigen::Index>(methods.size()) == values.cols(),
            "build_rank_matrix: labels do not match value matrix");
    RankMatrix rm;
    rm.datasets = std::move(datasets);
    rm.methods = std::move(methods);
    rm.equality_threshold = equality_threshold;
    rm.ranks.resize(values.rows(), values.cols());
    std::vector<double> row(static_cast<std::size_t>(values.cols()));
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            require(std::isfinite(values(i, j)), "build_rank_matrix: non-finite metric value");
            row[static_cast<std::size_t>(j)] = higher_is_better ? -values(i, j) : values(i, j);
        }
        const auto r = fractional_ranks(row, equality_threshold);
        for (Eigen::Index j = 0; j < values.cols(); ++j) rm.ranks(i, j) = r[static_cast<std::size_t>(j)];
    }
    return rm;
}

FriedmanResult friedman_test(const RankMatrix& ranks)
{
    const auto N = static_cast<double>(ranks.ranks.rows());
    const auto k = static_cast<double>(ranks.ranks.cols());
    require(N >= 2 && k >= 2, "friedman_test: need at least 2 datasets and 2 methods");

    const Vector mean = ranks.mean_ranks();
    FriedmanResult res;
    res.chi2 = 12.0 * N / (k * (k + 1.0)) * (mean.squaredNorm() - k * (k + 1.0) * (k + 1.0) / 4.0);
    if (std::abs(res.chi2) < 1e-12 * N * k) res.chi2 = 0.0;
    res.df1 = static_cast<int>(k) - 1;
    res.df2 = res.df1 * (static_cast<int>(N) - 1);

    boost::math::chi_squared_distribution<double> chi(res.df1);
    res.p_value_chi2 = res.chi2 <= 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(chi, res.chi2));

    const double denom = N * (k - 1.0) - res.chi2;
    if (denom <= 1e-12 * N * k) {
        res.perfect_consistency = true;
        res.f_stat = std::numeric_limits<double>::infinity();
        res.p_value_f = 0.0;
        return res;
    }
    res.f_stat = (N - 1.0) * res.chi2 / denom;
    boost::math::fisher_f_distribution<double> fdist(res.df1, res.df2);
    res.p_value_f = res.f_stat <= 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(fdist, res.f_stat));
    return res;
}

HolmResult holm_stepdown(const std::vector<std::pair<std::string, double>>& p_values, double alpha)
{
    require(alpha > 0.0 && alpha < 1.0, "holm_stepdown: alpha must be in (0, 1)");
    HolmResult res;
    res.alpha = alpha;
    for (const auto& [name, p] : p_values) {
        require(p >= 0.0 && p <= 1.0, "holm_stepdown: p-value outside [0, 1] for " + name);
        res.entries.push_back({name, p, 0.0, false});
    }
    std::stable_sort(res.entries.begin(), res.entries.end(),
                     [](const HolmEntry& a, const HolmEntry& b) { return a.p_value < b.p_value; });
    const auto h = res.entries.size();
    bool rejecting = true;
    for (std::size_t i = 0; i < h; ++i) {
        auto& e = res.entries[i];
        e.threshold = alpha / static_cast<double>(h - i);
        rejecting = rejecting && e.p_value <= e.threshold;
        e.reject = rejecting;
    }
    return res;
}

std::vector<std::pair<std::string, double>> pairwise_z_pvalues(const RankMatrix& ranks,
                                                               const std::string& reference)
{
    const auto N = static_cast<double>(ranks.ranks.rows());
    const auto k = static_cast<double>(ranks.ranks.cols());
    require(N >= 2, "pairwise_z_pvalues: need at least 2 datasets");
    const auto it = std::find(ranks.methods.begin(), ranks.methods.end(), reference);
    require(it != ranks.methods.end(), "pairwise_z_pvalues: unknown reference method " + reference);
    const auto ref = static_cast<Eigen::Index>(it - ranks.methods.begin());

    const Vector mean = ranks.mean_ranks();
    const double se = std::sqrt(k * (k + 1.0) / (6.0 * N));
    std::vector<std::pair<std::string, double>> out;
    for (Eigen::Index j = 0; j < mean.size(); ++j) {
        if (j == ref) continue;
        const double z = (mean[j] - mean[ref]) / se;
        out.emplace_back(ranks.methods[static_cast<std::size_t>(j)], std::erfc(std::abs(z) / std::sqrt(2.0)));
    }
    return out;
}

std::vector<BestWorst> best_worst_counts(const Matrix& values, bool higher_is_better,
                                         double equality_threshold)
{
    require(values.rows() >= 1 && values.cols() >= 1, "best_worst_counts: empty record matrix");
    require(values.allFinite(), "best_worst_counts: missing or non-finite records");
    std::vector<BestWorst> counts(static_cast<std::size_t>(values.cols()));
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        const Vector row = higher_is_better ? Vector(-values.row(i).transpose()) : Vector(values.row(i).transpose());
        const double best = row.minCoeff();
        const double worst = row.maxCoeff();
        for (Eigen::Index j = 0; j < row.size(); ++j) {
            auto& c = counts[static_cast<std::size_t>(j)];
            if (row[j] - best < equality_threshold) ++c.times_best;
            if (worst - row[j] < equality_threshold) ++c.times_worst;
        }
    }
    return counts;
}

} // namespace sparsestep
