#pragma once

// Golden checks for the two built-in instances and generic consistency checks
// for any other problem file.

#include <pvvi/pvvi.hpp>

#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace pvvi::cli {

struct CheckRow {
    std::string check;
    std::string expected;
    std::string actual;
    std::string tolerance;
    bool pass = false;
};

struct VerifyContext {
    SolverConfig cfg;
    std::size_t grid = 400;
    double eps = 0.5;
};

namespace detail {

inline std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

inline std::string point(const std::vector<double>& x)
{
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i)
        s += (i ? ", " : "") + num(x[i]);
    return s + ")";
}

/// Weight grid 0.1, 0.2, ... built from integers so the values are reproducible.
inline double tenth(int k) { return static_cast<double>(k) / 10.0; }

inline std::vector<double> po_closed_form(double t)
{
    if (t < 0.25 || t > 0.75)
        return {1.0 / (1.0 - 2.0 * t), 0.0};
    const double c = 1.0 - 2.0 * t;
    const double lam = std::sqrt(1.0 - 4.0 * c * c);
    return {(1.0 + lam) / c, (2.0 * lam * lam + 2.0 * lam) / (c * c)};
}

inline bool subset_of(const SolutionCloud& a, const SolutionCloud& b, double tol)
{
    for (const auto& x : a.points) {
        bool hit = false;
        for (const auto& y : b.points)
            if (max_dist(x, y) <= tol) {
                hit = true;
                break;
            }
        if (!hit)
            return false;
    }
    return true;
}

inline void common_checks(const VviProblem& p, const MultifunctionGraph& g, const BoundReport& bound,
                          const VerifyContext& ctx, std::vector<CheckRow>& rows)
{
    double worst = 0.0;
    for (const auto& e : g.entries)
        for (const auto& s : e.solutions)
            worst = std::max(worst, residual(p, e.xi, s.x, s.lambda, s.mu));
    rows.push_back({"sweep residuals", "<= 1e-8", num(worst), "1e-8", worst <= 1e-8});

    const auto weak = assemble(g, CloudKind::weak);
    const auto proper = assemble(g, CloudKind::proper);
    rows.push_back({"proper cloud within weak cloud", "subset", subset_of(proper, weak, 0.0) ? "subset" : "not subset",
                    "exact", subset_of(proper, weak, 0.0)});

    const auto comps = count_components(weak, ctx.eps);
    const auto verdict = check_bound(bound, comps);
    rows.push_back({"component count within bound", "<= " + bound.bound.str(), std::to_string(comps.count),
                    "exact", verdict.pass});
}

inline void stability_check(const SolutionCloud& cloud, std::size_t want, std::vector<CheckRow>& rows)
{
    std::vector<double> eps_list;
    for (int k = 3; k <= 10; ++k)
        eps_list.push_back(tenth(k));
    const auto sweep = eps_sweep(cloud.points, eps_list);
    std::string counts;
    bool all = true;
    for (const auto& [e, c] : sweep.counts) {
        counts += (counts.empty() ? "" : " ") + std::to_string(c);
        all = all && c == want;
    }
    rows.push_back({"component count over eps 0.3..1.0", std::to_string(want) + " everywhere", counts,
                    "exact", all});
}

} // namespace detail

inline std::vector<CheckRow> verify_po(const VerifyContext& ctx)
{
    using detail::num;
    const VviProblem p = builtin::po();
    std::vector<CheckRow> rows;

    for (int k : {0, 10, 20, 25, 30, 40, 45, 55, 60, 70, 75, 80, 90, 100}) {
        const double t = static_cast<double>(k) / 100.0;
        const auto sols = solve_vi_xi(p, SimplexWeight::pair(t), ctx.cfg);
        const auto want = detail::po_closed_form(t);
        double err = std::numeric_limits<double>::infinity();
        if (sols.size() == 1)
            err = max_dist(sols.front().x, want);
        rows.push_back({"fiber xi1=" + num(t), "one point " + detail::point(want),
                        std::to_string(sols.size()) + " point(s)" +
                            (sols.empty() ? "" : " " + detail::point(sols.front().x)),
                        "1e-6", sols.size() == 1 && err <= 1e-6});
    }
    {
        const auto sols = solve_vi_xi(p, SimplexWeight::pair(0.5), ctx.cfg);
        rows.push_back({"fiber xi1=0.5", "empty", std::to_string(sols.size()) + " point(s)", "exact",
                        sols.empty()});
    }

    const auto bound = bound_vvi(p);
    rows.push_back({"bound d", "3", std::to_string(bound.d), "exact", bound.d == 3});
    rows.push_back({"bound value", "732421875", bound.bound.str(), "exact", bound.bound == 732421875});

    const auto graph = run_sweep(p, SimplexGrid::make(2, ctx.grid), ctx.cfg);
    std::string empty_at;
    for (const auto& e : graph.entries)
        if (e.solutions.empty())
            empty_at += (empty_at.empty() ? "" : " ") + num(e.xi[0]);
    rows.push_back({"empty fibers in sweep", "0.5", empty_at, "exact", empty_at == "0.5"});

    const auto weak = assemble(graph, CloudKind::weak);
    const auto comps = count_components(weak, ctx.eps);
    rows.push_back({"weak components at eps " + num(ctx.eps), "2", std::to_string(comps.count), "exact",
                    comps.count == 2});
    detail::stability_check(weak, 2, rows);
    detail::common_checks(p, graph, bound, ctx, rows);
    return rows;
}

inline std::vector<CheckRow> verify_vop(const VerifyContext& ctx)
{
    using detail::num;
    const VopProblem vop = builtin::vop();
    const VviProblem p = derive_vvi(vop);
    std::vector<CheckRow> rows;

    for (int k = 1; k <= 9; ++k) {
        const double t = detail::tenth(k);
        const auto sols = solve_vi_xi(p, SimplexWeight::pair(t), ctx.cfg);
        const double x1 = std::cbrt((1.0 - t) / t), x2 = std::sqrt(t / (1.0 - t));
        const std::vector<double> want{x1, x2};
        bool has = false, all_on_curve = !sols.empty();
        for (const auto& s : sols) {
            has = has || max_dist(s.x, want) <= 1e-6;
            all_on_curve = all_on_curve && std::abs(s.x[0] - x1) <= 1e-6 &&
                           std::abs(std::abs(s.x[1]) - x2) <= 1e-6;
        }
        std::string got;
        for (const auto& s : sols)
            got += (got.empty() ? "" : " ") + detail::point(s.x);
        rows.push_back({"fiber xi1=" + num(t), "contains " + detail::point(want), got.empty() ? "empty" : got,
                        "1e-6", has && all_on_curve});
    }
    for (double t : {0.0, 1.0}) {
        const auto sols = solve_vi_xi(p, SimplexWeight::pair(t), ctx.cfg);
        rows.push_back({"fiber xi1=" + num(t), "empty", std::to_string(sols.size()) + " point(s)", "exact",
                        sols.empty()});
    }

    const auto bound = bound_vop(vop);
    rows.push_back({"bound d", "4", std::to_string(bound.d), "exact", bound.d == 4});
    rows.push_back({"bound value", "55365148804", bound.bound.str(), "exact", bound.bound == 55365148804ULL});

    const auto graph = run_sweep(p, SimplexGrid::make(2, ctx.grid), ctx.cfg);
    const auto weak = assemble(graph, CloudKind::weak);
    const auto proper = assemble(graph, CloudKind::proper);

    double min_x1 = std::numeric_limits<double>::infinity(), curve = 0.0;
    for (const auto& x : weak.points) {
        min_x1 = std::min(min_x1, x[0]);
        curve = std::max(curve, std::abs(x[1] * x[1] * x[0] * x[0] * x[0] - 1.0));
    }
    rows.push_back({"no solution with x1 <= 0", "min x1 > 0", num(min_x1), "exact", min_x1 > 0});
    rows.push_back({"|x2^2 x1^3 - 1| over cloud", "<= 1e-5", num(curve), "1e-5", curve <= 1e-5});

    const auto comps = count_components(weak, ctx.eps);
    rows.push_back({"weak components at eps " + num(ctx.eps), "1", std::to_string(comps.count), "exact",
                    comps.count == 1});
    const bool same = weak.points == proper.points;
    rows.push_back({"proper cloud equals weak cloud", "equal",
                    same ? "equal" : std::to_string(proper.size()) + " vs " + std::to_string(weak.size()),
                    "exact", same});
    detail::common_checks(p, graph, bound, ctx, rows);
    return rows;
}

inline std::vector<CheckRow> verify_generic(const Problem& problem, const VerifyContext& ctx)
{
    const VviProblem p = to_vvi(problem);
    const auto bound = bound_problem(problem);
    const auto graph = run_sweep(p, SimplexGrid::make(p.m, ctx.grid), ctx.cfg);
    std::vector<CheckRow> rows;
    detail::common_checks(p, graph, bound, ctx, rows);
    return rows;
}

inline void print_table(const std::vector<CheckRow>& rows, std::ostream& out)
{
    std::size_t w[4] = {5, 8, 6, 9};
    for (const auto& r : rows) {
        w[0] = std::max(w[0], r.check.size());
        w[1] = std::max(w[1], r.expected.size());
        w[2] = std::max(w[2], r.actual.size());
        w[3] = std::max(w[3], r.tolerance.size());
    }
    auto line = [&](const std::string& a, const std::string& b, const std::string& c,
                    const std::string& d, const std::string& e) {
        out << std::left << std::setw(static_cast<int>(w[0])) << a << "  "
            << std::setw(static_cast<int>(w[1])) << b << "  " << std::setw(static_cast<int>(w[2])) << c
            << "  " << std::setw(static_cast<int>(w[3])) << d << "  " << e << "\n";
    };
    line("check", "expected", "actual", "tolerance", "result");
    for (const auto& r : rows)
        line(r.check, r.expected, r.actual, r.tolerance, r.pass ? "PASS" : "FAIL");
}

} // namespace pvvi::cli
