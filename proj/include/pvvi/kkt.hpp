#pragma once

/**
 * @file kkt.hpp
 * @brief Scalarized KKT systems for a fixed simplex weight.
 *
 * For weight xi the scalar VI has operator sum_l xi_l F_l. Its KKT system in
 * the unknowns (x, lambda, mu) is
 *
 *     sum_l xi_l F_lk(x) + sum_i lambda_i dg_i/dx_k + sum_j mu_j dh_j/dx_k = 0   (k = 1..n)
 *     lambda_i g_i(x) = 0,  h_j(x) = 0,  lambda >= 0,  g(x) <= 0.
 *
 * Complementarity is written per constraint; with lambda >= 0 and g <= 0 that
 * is equivalent to lambda^T g = 0 and gives square systems once an active set
 * is fixed.
 */

#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace pvvi {

/// A point of the standard simplex.
class SimplexWeight {
  public:
    /// Minimum entry for a weight to count as relative-interior.
    static constexpr double interior_threshold = 1e-9;

    SimplexWeight() = default;
    explicit SimplexWeight(std::vector<double> xi) : xi_(std::move(xi))
    {
        if (xi_.empty())
            throw DimensionError("simplex weight must have at least one entry");
        double sum = 0.0;
        for (double v : xi_) {
            if (!(v >= 0.0))
                throw std::invalid_argument("simplex weight entries must be >= 0");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("simplex weight entries must sum to 1");
    }

    /// (t, 1 - t) for bicriteria problems.
    static SimplexWeight pair(double t) { return SimplexWeight({t, 1.0 - t}); }

    std::size_t size() const { return xi_.size(); }
    double operator[](std::size_t l) const { return xi_[l]; }
    const std::vector<double>& values() const { return xi_; }

    bool interior() const
    {
        return std::all_of(xi_.begin(), xi_.end(),
                           [](double v) { return v >= interior_threshold; });
    }

    friend bool operator==(const SimplexWeight&, const SimplexWeight&) = default;
    friend auto operator<=>(const SimplexWeight& a, const SimplexWeight& b)
    {
        return a.xi_ <=> b.xi_;
    }

  private:
    std::vector<double> xi_;
};

/// Indices (0-based, ascending) of inequality constraints treated as active.
struct ActiveSet {
    std::vector<std::size_t> indices;

    static ActiveSet from_mask(std::uint64_t mask, std::size_t count)
    {
        ActiveSet a;
        for (std::size_t i = 0; i < count; ++i)
            if (mask & (std::uint64_t{1} << i))
                a.indices.push_back(i);
        return a;
    }

    bool contains(std::size_t i) const
    {
        return std::binary_search(indices.begin(), indices.end(), i);
    }
    std::size_t size() const { return indices.size(); }
    bool empty() const { return indices.empty(); }

    friend bool operator==(const ActiveSet&, const ActiveSet&) = default;
};

struct SignCondition {
    enum class Relation { nonnegative, nonpositive };
    Polynomial expr;
    Relation relation;
    std::string label;
};

/// Full system in unknowns (x_1..x_n, lambda_1..lambda_|I|, mu_1..mu_|J|).
struct KktSystem {
    std::size_t n = 0;
    std::size_t num_ineq = 0;
    std::size_t num_eq = 0;
    SimplexWeight xi;
    /// n stationarity rows, then lambda_i g_i for each i, then h_j for each j.
    std::vector<Polynomial> equations;
    /// lambda_i >= 0 and g_i <= 0.
    std::vector<SignCondition> inequalities;

    std::size_t num_unknowns() const { return n + num_ineq + num_eq; }
    std::span<const Polynomial> stationarity() const
    {
        return std::span(equations).first(n);
    }
};

/// Square system in unknowns (x, lambda_A, mu) for one active set.
struct ActiveSystem {
    std::size_t n = 0;
    std::size_t num_eq = 0;
    ActiveSet active;
    std::vector<Polynomial> equations;

    std::size_t num_unknowns() const { return n + active.size() + num_eq; }
};

namespace detail {

inline void require_valid(const VviProblem& p)
{
    ValidateOptions opt;
    opt.convexity_probe = false;
    auto fs = validate(p, opt);
    if (has_errors(fs))
        throw ValidationError(fs);
}

inline void require_weight(const VviProblem& p, const SimplexWeight& xi)
{
    if (xi.size() != p.m)
        throw DimensionError("simplex weight has " + std::to_string(xi.size()) +
                             " entries, problem has m = " + std::to_string(p.m));
}

/// Stationarity rows with lambda_i placed at lambda_slot[i] (or dropped when absent).
inline std::vector<Polynomial>
stationarity_rows(const VviProblem& p, const SimplexWeight& xi, std::size_t nvars,
                  std::span<const std::optional<std::size_t>> lambda_slot, std::size_t mu_offset)
{
    const std::size_t n = p.n;
    std::vector<Polynomial> rows;
    rows.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Polynomial row(nvars);
        for (std::size_t l = 0; l < p.m; ++l)
            if (xi[l] != 0.0)
                row += p.F[l][k].shifted(nvars, 0).scaled(xi[l]);
        for (std::size_t i = 0; i < p.K.g.size(); ++i) {
            if (!lambda_slot[i])
                continue;
            row += Polynomial::variable(nvars, *lambda_slot[i]) *
                   p.K.g[i].partial(k).shifted(nvars, 0);
        }
        for (std::size_t j = 0; j < p.K.h.size(); ++j)
            row += Polynomial::variable(nvars, mu_offset + j) *
                   p.K.h[j].partial(k).shifted(nvars, 0);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

inline KktSystem build_full_system(const VviProblem& p, const SimplexWeight& xi)
{
    detail::require_valid(p);
    detail::require_weight(p, xi);
    const std::size_t n = p.n, ni = p.K.g.size(), nj = p.K.h.size();
    const std::size_t nvars = n + ni + nj;

    std::vector<std::optional<std::size_t>> slot(ni);
    for (std::size_t i = 0; i < ni; ++i)
        slot[i] = n + i;

    KktSystem sys;
    sys.n = n;
    sys.num_ineq = ni;
    sys.num_eq = nj;
    sys.xi = xi;
    sys.equations = detail::stationarity_rows(p, xi, nvars, slot, n + ni);
    for (std::size_t i = 0; i < ni; ++i) {
        const Polynomial g = p.K.g[i].shifted(nvars, 0);
        const Polynomial lam = Polynomial::variable(nvars, n + i);
        sys.equations.push_back(lam * g);
        sys.inequalities.push_back({lam, SignCondition::Relation::nonnegative,
                                    "lambda" + std::to_string(i + 1) + " >= 0"});
        sys.inequalities.push_back({g, SignCondition::Relation::nonpositive,
                                    "g" + std::to_string(i + 1) + " <= 0"});
    }
    for (std::size_t j = 0; j < nj; ++j)
        sys.equations.push_back(p.K.h[j].shifted(nvars, 0));
    return sys;
}

inline ActiveSystem build_active_system(const VviProblem& p, const SimplexWeight& xi,
                                        const ActiveSet& A)
{
    detail::require_valid(p);
    detail::require_weight(p, xi);
    const std::size_t n = p.n, ni = p.K.g.size(), nj = p.K.h.size();
    for (auto i : A.indices)
        if (i >= ni)
            throw DimensionError("active index out of range");
    const std::size_t nvars = n + A.size() + nj;

    std::vector<std::optional<std::size_t>> slot(ni);
    for (std::size_t a = 0; a < A.size(); ++a)
        slot[A.indices[a]] = n + a;

    ActiveSystem sys;
    sys.n = n;
    sys.num_eq = nj;
    sys.active = A;
    sys.equations = detail::stationarity_rows(p, xi, nvars, slot, n + A.size());
    for (auto i : A.indices)
        sys.equations.push_back(p.K.g[i].shifted(nvars, 0));
    for (std::size_t j = 0; j < nj; ++j)
        sys.equations.push_back(p.K.h[j].shifted(nvars, 0));
    return sys;
}

/// Max-norm violation of the KKT conditions at (x, lambda, mu); zero iff they hold exactly.
inline double residual(const VviProblem& p, const SimplexWeight& xi, std::span<const double> x,
                       std::span<const double> lambda, std::span<const double> mu)
{
    detail::require_weight(p, xi);
    const std::size_t n = p.n;
    if (x.size() != n || lambda.size() != p.K.g.size() || mu.size() != p.K.h.size())
        throw DimensionError("residual: argument sizes do not match the problem");
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < p.m; ++l)
            s += xi[l] * p.F[l][k].eval(x);
        for (std::size_t i = 0; i < p.K.g.size(); ++i)
            s += lambda[i] * p.K.g[i].partial(k).eval(x);
        for (std::size_t j = 0; j < p.K.h.size(); ++j)
            s += mu[j] * p.K.h[j].partial(k).eval(x);
        r = std::max(r, std::abs(s));
    }
    for (std::size_t i = 0; i < p.K.g.size(); ++i) {
        const double gi = p.K.g[i].eval(x);
        r = std::max({r, std::abs(lambda[i] * gi), std::max(0.0, gi), std::max(0.0, -lambda[i])});
    }
    for (const auto& hj : p.K.h)
        r = std::max(r, std::abs(hj.eval(x)));
    return r;
}

} // namespace pvvi
