#pragma once

/**
 * @file solve.hpp
 * @brief Fixed-weight KKT solving by active-set enumeration and multi-start
 * damped Newton, plus a brute-force grid oracle for the scalar VI.
 *
 * For each subset A of the inequality indices the square system of
 * build_active_system is solved from a seeded, shifted Halton start set.
 * Starts are repeated at several scales of the box. Roots that pass the
 * sign conditions and an independent residual check are kept, deduplicated
 * in x, and returned sorted.
 */

#include "kkt.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvvi {

struct SolverConfig {
    double newton_tol = 1e-12;     ///< step-norm stopping test (relative to max(1, |x|))
    double residual_accept = 1e-8; ///< max-norm residual a root must reach
    int max_iter = 100;
    int starts_per_system = 27;
    double start_box = 10.0; ///< starts drawn from [-start_box, start_box] per unknown
    /// One start set per factor, in [-s * start_box, s * start_box]; far roots need the wide ones.
    std::vector<double> start_scales{1.0, 10.0, 100.0, 1000.0};
    double dedupe_eps = 1e-6;
    std::uint64_t rng_seed = 42;
    std::size_t max_inequalities = 12; ///< enumeration guard on |I|

    void check() const
    {
        if (!(newton_tol > 0 && residual_accept > 0 && start_box > 0 && dedupe_eps > 0) ||
            max_iter < 1 || starts_per_system < 1 || start_scales.empty() ||
            std::any_of(start_scales.begin(), start_scales.end(), [](double s) { return !(s > 0); }))
            throw std::invalid_argument("solver tolerances and counts must be positive");
    }
};

struct SolverGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KktSolution {
    SimplexWeight xi;
    std::vector<double> x;
    std::vector<double> lambda;
    std::vector<double> mu;
    ActiveSet active;
    double residual = 0.0;
};

/// Square polynomial map R^k -> R^k with its symbolic Jacobian.
class PolynomialMap {
  public:
    explicit PolynomialMap(std::vector<Polynomial> equations) : eqs_(std::move(equations))
    {
        const std::size_t k = eqs_.size();
        if (k == 0)
            throw DimensionError("empty polynomial system");
        for (const auto& e : eqs_)
            if (e.nvars() != k)
                throw DimensionError("polynomial system is not square");
        jac_.reserve(k * k);
        for (const auto& e : eqs_)
            for (std::size_t j = 0; j < k; ++j)
                jac_.push_back(e.partial(j));
    }

    std::size_t size() const { return eqs_.size(); }
    const std::vector<Polynomial>& equations() const { return eqs_; }

    void eval(std::span<const double> x, Eigen::VectorXd& out) const
    {
        out.resize(static_cast<Eigen::Index>(eqs_.size()));
        for (std::size_t i = 0; i < eqs_.size(); ++i)
            out(static_cast<Eigen::Index>(i)) = eqs_[i].eval(x);
    }

    void jacobian(std::span<const double> x, Eigen::MatrixXd& out) const
    {
        const auto k = static_cast<Eigen::Index>(eqs_.size());
        out.resize(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                out(i, j) = jac_[static_cast<std::size_t>(i * k + j)].eval(x);
    }

  private:
    std::vector<Polynomial> eqs_;
    std::vector<Polynomial> jac_;
};

struct NewtonResult {
    bool converged = false;
    std::vector<double> root;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::string failure;
};

inline NewtonResult newton_solve(const PolynomialMap& sys, std::span<const double> start,
                                 const SolverConfig& cfg)
{
    const std::size_t k = sys.size();
    if (start.size() != k)
        throw DimensionError("newton_solve: start has wrong dimension");

    NewtonResult res;
    std::vector<double> x(start.begin(), start.end());
    std::vector<double> trial(k);
    Eigen::VectorXd r, rt;
    Eigen::MatrixXd J;
    auto max_norm = [](const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; };

    sys.eval(x, r);
    auto finish = [&](bool ok, std::string why) {
        res.residual = max_norm(r);
        res.converged = ok && std::isfinite(res.residual) && res.residual <= cfg.residual_accept;
        if (!res.converged && why.empty())
            why = "residual above acceptance threshold";
        res.failure = res.converged ? std::string{} : std::move(why);
        res.root = x;
        return res;
    };

    for (int it = 0; it < cfg.max_iter; ++it) {
        const double rn = r.norm();
        if (rn == 0.0)
            return finish(true, {});
        sys.jacobian(x, J);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible())
            return finish(false, "singular Jacobian");
        const Eigen::VectorXd step = lu.solve(-r);
        if (!step.allFinite())
            return finish(false, "non-finite Newton step");

        // halve until the residual norm decreases; at the damping floor the step is taken anyway
        double t = 1.0;
        for (;;) {
            for (std::size_t i = 0; i < k; ++i)
                trial[i] = x[i] + t * step(static_cast<Eigen::Index>(i));
            sys.eval(trial, rt);
            if ((rt.allFinite() && rt.norm() < rn) || t * 0.5 < 1e-4)
                break;
            t *= 0.5;
        }
        if (!rt.allFinite())
            return finish(false, "non-finite residual");

        x = trial;
        r = rt;
        res.iterations = it + 1;
        double xmax = 0.0;
        for (double v : x)
            xmax = std::max(xmax, std::abs(v));
        if (xmax > 1e10)
            return finish(false, "divergence");
        if (t * step.cwiseAbs().maxCoeff() <= cfg.newton_tol * std::max(1.0, xmax))
            return finish(true, {});
    }
    return finish(false, "iteration limit");
}

inline NewtonResult newton_solve(std::vector<Polynomial> equations, std::span<const double> start,
                                 const SolverConfig& cfg)
{
    return newton_solve(PolynomialMap(std::move(equations)), start, cfg);
}

namespace detail {

inline std::vector<unsigned> first_primes(std::size_t count)
{
    std::vector<unsigned> ps;
    for (unsigned c = 2; ps.size() < count; ++c) {
        bool prime = true;
        for (unsigned p : ps) {
            if (p * p > c)
                break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime)
            ps.push_back(c);
    }
    return ps;
}

inline double radical_inverse(std::uint64_t i, unsigned base)
{
    double inv = 1.0 / base, f = inv, v = 0.0;
    while (i > 0) {
        v += static_cast<double>(i % base) * f;
        i /= base;
        f *= inv;
    }
    return v;
}

inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

} // namespace detail

/// Halton points in [-box, box]^dim, rotated by a shift drawn from (seed, stream).
inline std::vector<std::vector<double>> start_points(std::size_t dim, std::size_t count, double box,
                                                     std::uint64_t seed, std::uint64_t stream)
{
    const auto primes = detail::first_primes(dim);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<double> shift(dim);
    for (auto& s : shift)
        s = detail::unit_double(rng());
    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t d = 0; d < dim; ++d) {
            double u = detail::radical_inverse(i + 1, primes[d]) + shift[d];
            u -= std::floor(u);
            pts[i][d] = -box + 2.0 * box * u;
        }
    return pts;
}

inline bool lex_less(const std::vector<double>& a, const std::vector<double>& b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline double max_dist(std::span<const double> a, std::span<const double> b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// All KKT points of the scalar VI at weight xi that the multi-start search finds.
inline std::vector<KktSolution> solve_vi_xi(const VviProblem& p, const SimplexWeight& xi,
                                            const SolverConfig& cfg = {})
{
    cfg.check();
    detail::require_valid(p);
    detail::require_weight(p, xi);
    const std::size_t n = p.n, ni = p.K.g.size();
    if (ni > cfg.max_inequalities || ni >= 63)
        throw SolverGuardError("active-set enumeration guard: |I| = " + std::to_string(ni) +
                               " exceeds " + std::to_string(cfg.max_inequalities));

    struct Candidate {
        KktSolution sol;
        std::uint64_t mask;
    };
    std::vector<Candidate> found;
    const std::uint64_t nsets = std::uint64_t{1} << ni;
    for (std::uint64_t mask = 0; mask < nsets; ++mask) {
        const ActiveSet A = ActiveSet::from_mask(mask, ni);
        const ActiveSystem sys = build_active_system(p, xi, A);
        const PolynomialMap map(sys.equations);
        std::vector<std::vector<double>> starts;
        for (std::size_t si = 0; si < cfg.start_scales.size(); ++si) {
            auto pts = start_points(sys.num_unknowns(),
                                    static_cast<std::size_t>(cfg.starts_per_system),
                                    cfg.start_box * cfg.start_scales[si], cfg.rng_seed,
                                    mask * cfg.start_scales.size() + si);
            starts.insert(starts.end(), pts.begin(), pts.end());
        }
        for (const auto& s : starts) {
            const NewtonResult r = newton_solve(map, s, cfg);
            if (!r.converged)
                continue;
            KktSolution sol;
            sol.xi = xi;
            sol.active = A;
            sol.x.assign(r.root.begin(), r.root.begin() + static_cast<std::ptrdiff_t>(n));
            sol.lambda.assign(ni, 0.0);
            for (std::size_t a = 0; a < A.size(); ++a)
                sol.lambda[A.indices[a]] = r.root[n + a];
            sol.mu.assign(r.root.begin() + static_cast<std::ptrdiff_t>(n + A.size()), r.root.end());

            bool ok = true;
            for (std::size_t i = 0; i < ni && ok; ++i) {
                if (A.contains(i))
                    ok = sol.lambda[i] >= -1e-9;
                else
                    ok = p.K.g[i].eval(sol.x) <= 1e-9;
            }
            if (!ok)
                continue;
            sol.residual = residual(p, xi, sol.x, sol.lambda, sol.mu);
            if (!(sol.residual <= cfg.residual_accept))
                continue;
            found.push_back({std::move(sol), mask});
        }
    }

    std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
        if (a.sol.residual != b.sol.residual)
            return a.sol.residual < b.sol.residual;
        if (a.sol.x != b.sol.x)
            return lex_less(a.sol.x, b.sol.x);
        return a.mask < b.mask;
    });
    std::vector<KktSolution> kept;
    for (auto& c : found) {
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](const KktSolution& k) {
            return max_dist(k.x, c.sol.x) < cfg.dedupe_eps;
        });
        if (!dup)
            kept.push_back(std::move(c.sol));
    }
    std::sort(kept.begin(), kept.end(),
              [](const KktSolution& a, const KktSolution& b) { return lex_less(a.x, b.x); });
    return kept;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

struct Box {
    std::vector<double> lo, hi;

    static Box cube(std::size_t n, double r)
    {
        return {std::vector<double>(n, -r), std::vector<double>(n, r)};
    }
    bool on_boundary(std::span<const double> x, double margin) const
    {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] <= lo[i] + margin || x[i] >= hi[i] - margin)
                return true;
        return false;
    }
};

struct BruteForceResult {
    std::vector<double> best_x;
    double best_gap = -std::numeric_limits<double>::infinity();
    /// Every feasible grid point with its gap min_y <G(x), y - x> (always <= 0).
    std::vector<std::vector<double>> points;
    std::vector<double> gaps;

    std::vector<std::vector<double>> near_solutions(double tol) const
    {
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (gaps[i] >= -tol)
                out.push_back(points[i]);
        return out;
    }
};

/// Grid search for the scalar VI on K ∩ box. Inequalities are tested exactly,
/// equalities to within the grid step. Test oracle only: O(points^2).
inline BruteForceResult brute_force_vi(const VviProblem& p, const SimplexWeight& xi,
                                       const Box& box, double grid_step)
{
    detail::require_weight(p, xi);
    const std::size_t n = p.n;
    if (box.lo.size() != n || box.hi.size() != n || !(grid_step > 0))
        throw std::invalid_argument("brute_force_vi: bad box or step");

    std::vector<std::size_t> counts(n);
    for (std::size_t d = 0; d < n; ++d) {
        if (!(box.hi[d] >= box.lo[d]) || !std::isfinite(box.hi[d] - box.lo[d]))
            throw std::invalid_argument("brute_force_vi: box must be bounded");
        counts[d] = static_cast<std::size_t>(std::floor((box.hi[d] - box.lo[d]) / grid_step + 1e-9)) + 1;
    }

    BruteForceResult res;
    std::vector<std::vector<double>> G;
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> x(n);
    for (bool more = true; more;) {
        for (std::size_t d = 0; d < n; ++d)
            x[d] = box.lo[d] + static_cast<double>(idx[d]) * grid_step;
        bool feasible = true;
        for (const auto& g : p.K.g)
            feasible = feasible && g.eval(x) <= 0.0;
        for (const auto& h : p.K.h)
            feasible = feasible && std::abs(h.eval(x)) <= grid_step;
        if (feasible) {
            std::vector<double> gx(n, 0.0);
            for (std::size_t l = 0; l < p.m; ++l)
                for (std::size_t k = 0; k < n; ++k)
                    gx[k] += xi[l] * p.F[l][k].eval(x);
            res.points.push_back(x);
            G.push_back(std::move(gx));
        }
        more = false;
        for (std::size_t d = 0; d < n; ++d) {
            if (++idx[d] < counts[d]) {
                more = true;
                break;
            }
            idx[d] = 0;
        }
    }
    if (res.points.empty())
        throw std::runtime_error("brute_force_vi: empty feasible grid");

    res.gaps.resize(res.points.size());
    for (std::size_t a = 0; a < res.points.size(); ++a) {
        const auto& xa = res.points[a];
        const auto& ga = G[a];
        double gx = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            gx += ga[k] * xa[k];
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& y : res.points) {
            double gy = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                gy += ga[k] * y[k];
            lo = std::min(lo, gy);
        }
        res.gaps[a] = lo - gx;
        if (res.gaps[a] > res.best_gap) {
            res.best_gap = res.gaps[a];
            res.best_x = xa;
        }
    }
    return res;
}

} // namespace pvvi
