#pragma once

/**
 * @file sweep.hpp
 * @brief Simplex grids, the sampled graph of xi -> Sol(VI)_xi, and the weak /
 * proper solution clouds assembled from it.
 */

#include "detail/numfmt.hpp"
#include "detail/parallel.hpp"
#include "solve.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace pvvi {

/// All xi = (k_1/N, ..., k_m/N) with sum k = N, ascending lexicographically.
inline std::vector<SimplexWeight> sample_simplex(std::size_t m, std::size_t N, bool interior_only)
{
    if (m == 0 || N == 0)
        throw std::invalid_argument("sample_simplex: need m >= 1 and N >= 1");
    std::vector<SimplexWeight> out;
    std::vector<std::size_t> k(m, 0);
    const double dN = static_cast<double>(N);
    // odometer over compositions, first coordinate slowest
    auto emit = [&] {
        if (interior_only && std::any_of(k.begin(), k.end(), [](auto v) { return v == 0; }))
            return;
        std::vector<double> xi(m);
        for (std::size_t l = 0; l < m; ++l)
            xi[l] = static_cast<double>(k[l]) / dN;
        out.emplace_back(std::move(xi));
    };
    auto rec = [&](auto&& self, std::size_t l, std::size_t remaining) -> void {
        if (l + 1 == m) {
            k[l] = remaining;
            emit();
            return;
        }
        for (std::size_t v = 0; v <= remaining; ++v) {
            k[l] = v;
            self(self, l + 1, remaining - v);
        }
    };
    rec(rec, 0, N);
    return out;
}

struct SimplexGrid {
    std::size_t m = 0;
    std::size_t resolution = 0;
    std::vector<SimplexWeight> points;

    static SimplexGrid make(std::size_t m, std::size_t N, bool interior_only = false)
    {
        return {m, N, sample_simplex(m, N, interior_only)};
    }
};

struct MultifunctionGraph {
    struct Entry {
        SimplexWeight xi;
        std::vector<KktSolution> solutions;
    };

    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t resolution = 0;
    SolverConfig cfg;
    std::string problem_hash;
    std::vector<Entry> entries;

    std::size_t solution_count() const
    {
        std::size_t c = 0;
        for (const auto& e : entries)
            c += e.solutions.size();
        return c;
    }
    std::size_t empty_fibers() const
    {
        return static_cast<std::size_t>(std::count_if(
            entries.begin(), entries.end(), [](const Entry& e) { return e.solutions.empty(); }));
    }
};

inline MultifunctionGraph run_sweep(const VviProblem& p, const SimplexGrid& grid,
                                    const SolverConfig& cfg = {})
{
    detail::require_valid(p);
    if (grid.m != p.m)
        throw DimensionError("grid dimension differs from problem m");
    MultifunctionGraph g;
    g.n = p.n;
    g.m = p.m;
    g.resolution = grid.resolution;
    g.cfg = cfg;
    g.problem_hash = problem_hash(Problem(p));
    g.entries.resize(grid.points.size());
    detail::parallel_for(grid.points.size(), [&](std::size_t i) {
        g.entries[i] = {grid.points[i], solve_vi_xi(p, grid.points[i], cfg)};
    });
    std::stable_sort(g.entries.begin(), g.entries.end(),
                     [](const auto& a, const auto& b) { return a.xi < b.xi; });
    return g;
}

enum class CloudKind { weak, proper, stationary, proper_stationary };

inline const char* to_string(CloudKind k)
{
    switch (k) {
    case CloudKind::weak: return "weak";
    case CloudKind::proper: return "proper";
    case CloudKind::stationary: return "stationary";
    case CloudKind::proper_stationary: return "proper_stationary";
    }
    return "?";
}

inline bool interior_only(CloudKind k)
{
    return k == CloudKind::proper || k == CloudKind::proper_stationary;
}

struct SolutionCloud {
    struct Witness {
        std::size_t entry;
        std::size_t solution;
    };

    CloudKind kind = CloudKind::weak;
    double box = 0.0; ///< points with max-norm above this were clipped
    double dedupe_eps = 0.0;
    std::vector<std::vector<double>> points;
    std::vector<Witness> witnesses;
    std::size_t clipped = 0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Union of fibers over the whole grid (weak, stationary) or over interior
/// weights only (proper, proper_stationary), clipped to the solver box and
/// deduplicated. Interior fibers are folded first, so the proper cloud of a
/// graph is always a subset of its weak cloud.
inline SolutionCloud assemble(const MultifunctionGraph& graph, CloudKind kind)
{
    SolutionCloud cloud;
    cloud.kind = kind;
    cloud.box = graph.cfg.start_box;
    cloud.dedupe_eps = graph.cfg.dedupe_eps;
    const double eps = graph.cfg.dedupe_eps;
    std::multimap<double, std::size_t> by_first;

    auto fold = [&](std::size_t ei) {
        const auto& sols = graph.entries[ei].solutions;
        for (std::size_t si = 0; si < sols.size(); ++si) {
            const auto& x = sols[si].x;
            double norm = 0.0;
            for (double v : x)
                norm = std::max(norm, std::abs(v));
            if (norm > cloud.box) {
                ++cloud.clipped;
                continue;
            }
            bool dup = false;
            for (auto it = by_first.lower_bound(x[0] - eps);
                 it != by_first.end() && it->first <= x[0] + eps; ++it)
                if (max_dist(cloud.points[it->second], x) < eps) {
                    dup = true;
                    break;
                }
            if (dup)
                continue;
            by_first.emplace(x[0], cloud.points.size());
            cloud.points.push_back(x);
            cloud.witnesses.push_back({ei, si});
        }
    };
    for (std::size_t ei = 0; ei < graph.entries.size(); ++ei)
        if (graph.entries[ei].xi.interior())
            fold(ei);
    if (!interior_only(kind))
        for (std::size_t ei = 0; ei < graph.entries.size(); ++ei)
            if (!graph.entries[ei].xi.interior())
                fold(ei);
    return cloud;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_active_set(const ActiveSet& a)
{
    std::string s = "{";
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (i ? ";" : "") + std::to_string(a.indices[i] + 1);
    return s + "}";
}

inline void write_csv(const MultifunctionGraph& g, std::ostream& out)
{
    for (std::size_t l = 0; l < g.m; ++l)
        out << "xi_" << l + 1 << ",";
    for (std::size_t k = 0; k < g.n; ++k)
        out << "x_" << k + 1 << ",";
    out << "residual,active_set\n";
    for (const auto& e : g.entries) {
        std::string prefix;
        for (std::size_t l = 0; l < g.m; ++l)
            prefix += detail::format_double(e.xi[l]) + ",";
        if (e.solutions.empty()) {
            out << prefix << std::string(g.n, ',') << ",\n";
            continue;
        }
        for (const auto& s : e.solutions) {
            out << prefix;
            for (double v : s.x)
                out << detail::format_double(v) << ",";
            out << detail::format_double(s.residual) << "," << format_active_set(s.active) << "\n";
        }
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

inline double csv_number(const std::string& s, std::size_t line)
{
    double v = 0.0;
    if (!parse_double(s, v))
        throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

} // namespace detail

/// Reads a sweep CSV back into a graph. Multipliers are not stored in the CSV
/// and come back empty.
inline MultifunctionGraph read_csv(std::istream& in, const SolverConfig& cfg = {})
{
    MultifunctionGraph g;
    g.cfg = cfg;
    std::string line;
    if (!std::getline(in, line))
        return g;
    const auto header = detail::split_csv_line(line);
    for (const auto& h : header) {
        if (h.rfind("xi_", 0) == 0)
            ++g.m;
        else if (h.rfind("x_", 0) == 0)
            ++g.n;
    }
    if (g.m == 0 || g.n == 0 || header.size() != g.m + g.n + 2)
        throw std::runtime_error("csv: header must be xi_1..xi_m,x_1..x_n,residual,active_set");

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(header.size()) + " fields");
        std::vector<double> xi(g.m);
        for (std::size_t l = 0; l < g.m; ++l)
            xi[l] = detail::csv_number(cells[l], lineno);
        SimplexWeight w(xi);
        if (g.entries.empty() || !(g.entries.back().xi == w))
            g.entries.push_back({w, {}});
        if (cells[g.m].empty())
            continue;
        KktSolution s;
        s.xi = w;
        for (std::size_t k = 0; k < g.n; ++k)
            s.x.push_back(detail::csv_number(cells[g.m + k], lineno));
        s.residual = detail::csv_number(cells[g.m + g.n], lineno);
        std::string act = cells[g.m + g.n + 1];
        if (act.size() < 2 || act.front() != '{' || act.back() != '}')
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad active set");
        std::stringstream ss(act.substr(1, act.size() - 2));
        for (std::string tok; std::getline(ss, tok, ';');)
            s.active.indices.push_back(static_cast<std::size_t>(std::stoul(tok)) - 1);
        g.entries.back().solutions.push_back(std::move(s));
    }
    return g;
}

} // namespace pvvi
