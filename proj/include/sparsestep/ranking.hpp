#pragma once

#include <string>
#include <utility>
#include <vector>

#include <sparsestep/types.hpp>

namespace sparsestep {

/// Metrics closer than this are treated as equal performance.
inline constexpr double kEqualityThreshold = 1e-4;

/// Ascending fractional ranks (1 = smallest value). Values are sorted and
/// grouped while consecutive gaps are below threshold; each group shares the
/// mean of its positional ranks.
std::vector<double> fractional_ranks(const std::vector<double>& values,
                                     double equality_threshold = kEqualityThreshold);

/// Rows are datasets, columns are methods; smaller rank is better.
struct RankMatrix
{
    std::vector<std::string> datasets;
    std::vector<std::string> methods;
    Matrix ranks;
    double equality_threshold = kEqualityThreshold;

    Vector mean_ranks() const { return ranks.colwise().mean().transpose(); }
};

/// Rank every row of values (datasets x methods). With higher_is_better the
/// values are negated first so the best method still gets rank 1.
RankMatrix build_rank_matrix(const Matrix& values, std::vector<std::string> datasets,
                             std::vector<std::string> methods, bool higher_is_better,
                             double equality_threshold = kEqualityThreshold);

struct FriedmanResult
{
    double chi2 = 0.0;
    double p_value_chi2 = 1.0;
    double f_stat = 0.0;
    double p_value_f = 1.0;
    int df1 = 0;
    int df2 = 0;
    /// chi2 == N(k-1): every dataset ranks the methods identically, so the
    /// Iman-Davenport F statistic is undefined. f_stat is +inf and
    /// p_value_f is 0 in that case.
    bool perfect_consistency = false;
};

/// Friedman chi-square on the rank matrix plus the Iman-Davenport F form.
/// Requires N >= 2 datasets and k >= 2 methods.
FriedmanResult friedman_test(const RankMatrix& ranks);

struct HolmEntry
{
    std::string hypothesis;
    double p_value;
    double threshold;  // alpha / (h - i + 1)
    bool reject;
};

/// Entries sorted by ascending p-value; rejections form a prefix.
struct HolmResult
{
    double alpha = 0.05;
    std::vector<HolmEntry> entries;
};

HolmResult holm_stepdown(const std::vector<std::pair<std::string, double>>& p_values, double alpha);

/// Two-sided normal p-values of the mean-rank difference between each method
/// and the reference, z = (R_j - R_ref) / sqrt(k(k+1)/(6N)). Ordered as in
/// ranks.methods with the reference omitted.
std::vector<std::pair<std::string, double>> pairwise_z_pvalues(const RankMatrix& ranks,
                                                               const std::string& reference);

struct BestWorst
{
    int times_best = 0;
    int times_worst = 0;
};

/// Per method, how often it is (tied) best and (tied) worst across rows.
/// Throws InvalidArgument on non-finite entries.
std::vector<BestWorst> best_worst_counts(const Matrix& values, bool higher_is_better,
                                         double equality_threshold = kEqualityThreshold);

} // namespace sparsestep
