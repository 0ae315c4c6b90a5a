#pragma once

// Reference implementations used only as test oracles. Each one is written
// independently of the library code it checks.

#include <pvvi/pvvi.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace pvvi {

inline void PrintTo(const Polynomial& p, std::ostream* os) { *os << format_polynomial(p); }

} // namespace pvvi

namespace oracle {

/// Central difference of p along variable k.
inline double central_difference(const pvvi::Polynomial& p, std::vector<double> x, std::size_t k,
                                 double h = 1e-5)
{
    const double x0 = x[k];
    x[k] = x0 + h;
    const double fp = p.eval(x);
    x[k] = x0 - h;
    const double fm = p.eval(x);
    return (fp - fm) / (2.0 * h);
}

/// Component count of the eps-graph by breadth-first search over all pairs.
inline std::size_t components_bfs(const std::vector<std::vector<double>>& pts, double eps)
{
    const std::size_t n = pts.size();
    std::vector<bool> seen(n, false);
    std::size_t count = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s])
            continue;
        ++count;
        std::deque<std::size_t> q{s};
        seen[s] = true;
        while (!q.empty()) {
            const std::size_t a = q.front();
            q.pop_front();
            for (std::size_t b = 0; b < n; ++b) {
                if (seen[b])
                    continue;
                double d2 = 0.0;
                for (std::size_t k = 0; k < pts[a].size(); ++k)
                    d2 += (pts[a][k] - pts[b][k]) * (pts[a][k] - pts[b][k]);
                if (std::sqrt(d2) <= eps) {
                    seen[b] = true;
                    q.push_back(b);
                }
            }
        }
    }
    return count;
}

/// Decimal string product, digit by digit.
inline std::string decimal_mul(const std::string& a, const std::string& b)
{
    std::vector<int> acc(a.size() + b.size(), 0);
    for (std::size_t i = a.size(); i-- > 0;)
        for (std::size_t j = b.size(); j-- > 0;) {
            acc[i + j + 1] += (a[i] - '0') * (b[j] - '0');
        }
    for (std::size_t k = acc.size(); k-- > 1;) {
        acc[k - 1] += acc[k] / 10;
        acc[k] %= 10;
    }
    std::string out;
    for (int d : acc)
        if (!(out.empty() && d == 0))
            out += static_cast<char>('0' + d);
    return out.empty() ? "0" : out;
}

/// d * (2d - 1)^e by repeated schoolbook multiplication.
inline std::string bound_by_hand(std::uint64_t d, std::uint64_t e)
{
    std::string acc = std::to_string(d);
    const std::string base = std::to_string(2 * d - 1);
    for (std::uint64_t i = 0; i < e; ++i)
        acc = decimal_mul(acc, base);
    return acc;
}

/// Random polynomial of total degree <= deg with coefficients in [-10, 10].
inline pvvi::Polynomial random_polynomial(std::mt19937_64& rng, std::size_t nvars, unsigned deg,
                                          std::size_t terms = 6)
{
    std::uniform_real_distribution<double> coef(-10.0, 10.0);
    std::uniform_int_distribution<unsigned> dd(0, deg);
    std::uniform_int_distribution<std::size_t> var(0, nvars - 1);
    pvvi::Polynomial p(nvars);
    for (std::size_t t = 0; t < terms; ++t) {
        pvvi::Monomial m(nvars);
        const unsigned total = dd(rng);
        for (unsigned i = 0; i < total; ++i)
            ++m.exps[var(rng)];
        p.add_term(m, coef(rng));
    }
    return p;
}

/// Random valid instance: n, m <= 3, |I| <= 2, F of degree <= 3, convex g
/// (a separable quadratic or an affine function).
inline pvvi::VviProblem random_instance(std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> dim(1, 3), ineq(0, 2);
    std::uniform_int_distribution<unsigned> deg(1, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.2, 1.0), rhs(1.0, 5.0);
    const std::size_t n = dim(rng), m = dim(rng);
    pvvi::VviProblem p;
    p.n = n;
    p.m = m;
    p.K.n = n;
    p.K.convexity_asserted = true;
    p.K.acq_asserted = true;
    for (std::size_t l = 0; l < m; ++l) {
        std::vector<pvvi::Polynomial> comps;
        for (std::size_t k = 0; k < n; ++k)
            comps.push_back(random_polynomial(rng, n, deg(rng), 4));
        p.F.emplace_back(std::move(comps));
    }
    const std::size_t ni = ineq(rng);
    for (std::size_t i = 0; i < ni; ++i) {
        pvvi::Polynomial g = pvvi::Polynomial::constant(n, -rhs(rng));
        const bool quadratic = (i % 2) == 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto xk = pvvi::Polynomial::variable(n, k);
            if (quadratic)
                g += pos(rng) * (xk * xk);
            g += u(rng) * xk;
        }
        p.K.g.push_back(std::move(g));
    }
    return p;
}

/// Value and partial derivative k of p at x, term by term with std::pow.
inline double term_eval(const pvvi::Polynomial& p, const std::vector<double>& x, int k = -1)
{
    double s = 0.0;
    for (const auto& [m, c] : p.terms()) {
        double t = c;
        for (std::size_t v = 0; v < x.size(); ++v) {
            const auto e = m.exps[v];
            if (static_cast<int>(v) == k) {
                if (e == 0) {
                    t = 0.0;
                    break;
                }
                t *= e * std::pow(x[v], static_cast<double>(e - 1));
            } else {
                t *= std::pow(x[v], static_cast<double>(e));
            }
        }
        s += t;
    }
    return s;
}

/// Max-norm KKT violation: stationarity, primal feasibility, dual sign, complementarity.
inline double kkt_residual(const pvvi::VviProblem& p, const std::vector<double>& xi,
                           const std::vector<double>& x, const std::vector<double>& lambda,
                           const std::vector<double>& mu)
{
    double r = 0.0;
    for (std::size_t k = 0; k < p.n; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < p.m; ++l)
            s += xi[l] * term_eval(p.F[l][k], x);
        for (std::size_t i = 0; i < p.K.g.size(); ++i)
            s += lambda[i] * term_eval(p.K.g[i], x, static_cast<int>(k));
        for (std::size_t j = 0; j < p.K.h.size(); ++j)
            s += mu[j] * term_eval(p.K.h[j], x, static_cast<int>(k));
        r = std::max(r, std::abs(s));
    }
    for (std::size_t i = 0; i < p.K.g.size(); ++i) {
        const double gi = term_eval(p.K.g[i], x);
        r = std::max(r, std::max(gi, 0.0));
        r = std::max(r, std::max(-lambda[i], 0.0));
        r = std::max(r, std::abs(lambda[i] * gi));
    }
    for (const auto& h : p.K.h)
        r = std::max(r, std::abs(term_eval(h, x)));
    return r;
}

} // namespace oracle
