#include <sparsestep/cross_validation.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <sparsestep/baselines.hpp>
#include <sparsestep/metrics.hpp>
#include <sparsestep/rng.hpp>

namespace sparsestep {

std::string_view to_string(Method method)
{
    switch (method) {
    case Method::ols: return "ols";
    case Method::ridge: return "ridge";
    case Method::lasso: return "lasso";
    case Method::sparsestep: return "sparsestep";
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    for (auto m : {Method::ols, Method::ridge, Method::lasso, Method::sparsestep}) {
        if (to_string(m) == name) return m;
    }
    throw InvalidArgument("unknown method '" + std::string(name) +
                          "' (expected ols, ridge, lasso or sparsestep)");
}

std::vector<double> log2_lambda_grid(int count, double lo_exp, double hi_exp)
{
    require(count >= 1, "lambda grid: count must be >= 1");
    std::vector<double> grid(static_cast<std::size_t>(count));
    if (count == 1) {
        grid[0] = std::exp2(lo_exp);
        return grid;
    }
    const double step = (hi_exp - lo_exp) / (count - 1);
    for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = std::exp2(lo_exp + step * i);
    return grid;
}

CoefficientVector fit_method(Method method, const Dataset& data, const NormalEquations& ne,
                             double lambda, const SolverSchedule& schedule)
{
    switch (method) {
    case Method::ols: return ols_fit(ne);
    case Method::ridge: return ridge_fit(ne, lambda);
    case Method::lasso: return lasso_fit(ne, lambda);
    case Method::sparsestep: {
        SolverSchedule s = schedule;
        s.lambda = lambda;
        s.record_trace = false;
        return sparsestep_fit(data, ne, s).beta;
    }
    }
    throw InvalidArgument("fit_method: unknown method");
}

std::vector<std::vector<Eigen::Index>> kfold_splits(Eigen::Index n, int k, std::uint64_t seed)
{
    require(k >= 1, "kfold_splits: k must be >= 1");
    require(static_cast<Eigen::Index>(k) <= n, "kfold_splits: k = " + std::to_string(k) +
                                                     " exceeds n = " + std::to_string(n));
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
        std::swap(perm[i], perm[rng.below(i + 1)]);
    }
    std::vector<std::vector<Eigen::Index>> folds(static_cast<std::size_t>(k));
    const Eigen::Index base = n / k;
    const Eigen::Index extra = n % k;
    std::size_t pos = 0;
    for (Eigen::Index f = 0; f < k; ++f) {
        const Eigen::Index size = base + (f < extra ? 1 : 0);
        auto& fold = folds[static_cast<std::size_t>(f)];
        fold.assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(size)));
        std::sort(fold.begin(), fold.end());
        pos += static_cast<std::size_t>(size);
    }
    return folds;
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<Eigen::Index>& rows)
{
    Dataset out{Matrix(static_cast<Eigen::Index>(rows.size()), data.cols()),
                Vector(static_cast<Eigen::Index>(rows.size()))};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.X.row(static_cast<Eigen::Index>(i)) = data.X.row(rows[i]);
        out.y[static_cast<Eigen::Index>(i)] = data.y[rows[i]];
    }
    return out;
}

} // namespace

CvResult cv_grid_search(Method method, const Dataset& data, const std::vector<double>& lambda_grid,
                        int k, std::uint64_t seed, const SolverSchedule& schedule)
{
    require(data.X.rows() == data.y.size(), "cv_grid_search: X rows must match y length");
    CvResult res;
    if (is_penalized(method)) {
        require(!lambda_grid.empty(), "cv_grid_search: lambda grid is empty");
        res.lambdas = lambda_grid;
    } else {
        res.lambdas = {0.0};
    }
    const std::size_t L = res.lambdas.size();
    const auto folds = kfold_splits(data.rows(), k, seed);
    std::vector<double> sum(L, 0.0);
    std::vector<bool> valid(L, true);

    for (const auto& val_rows : folds) {
        std::vector<Eigen::Index> train_rows;
        train_rows.reserve(static_cast<std::size_t>(data.rows()) - val_rows.size());
        auto it = val_rows.begin();
        for (Eigen::Index i = 0; i < data.rows(); ++i) {
            if (it != val_rows.end() && *it == i) {
                ++it;
                continue;
            }
            train_rows.push_back(i);
        }
        std::optional<std::pair<Dataset, StandardizationParams>> scaled;
        try {
            scaled = standardize(take_rows(data, train_rows));
        } catch (const Error&) {
            std::fill(valid.begin(), valid.end(), false);
            continue;
        }
        const Dataset& train = scaled->first;
        const Dataset val = scaled->second.apply(take_rows(data, val_rows));
        const NormalEquations ne = NormalEquations::from(train);

        for (std::size_t l = 0; l < L; ++l) {
            if (!valid[l]) continue;
            try {
                const CoefficientVector beta = fit_method(method, train, ne, res.lambdas[l], schedule);
                sum[l] += test_mse(val.X * beta, val.y);
            } catch (const Error&) {
                valid[l] = false;
            }
        }
    }

    res.mean_mse.assign(L, std::numeric_limits<double>::quiet_NaN());
    res.valid = valid;
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t l = 0; l < L; ++l) {
        if (!valid[l]) continue;
        const double mse = sum[l] / static_cast<double>(folds.size());
        res.mean_mse[l] = mse;
        if (!any || mse < best || (mse == best && res.lambdas[l] > res.best_lambda)) {
            best = mse;
            res.best_lambda = res.lambdas[l];
            any = true;
        }
    }
    if (!any) {
        throw NumericError("cv_grid_search: every lambda failed for method " +
                           std::string(to_string(method)));
    }
    return res;
}

} // namespace sparsestep
