#pragma once

/**
 * @file bounds.hpp
 * @brief Explicit upper bounds d(2d-1)^e on the number of connected
 * components, evaluated exactly with arbitrary-precision integers.
 *
 *   generic system (s relations, v variables, degrees <= d):  e = s + v - 1
 *   VVI / VOP weak and proper sets:                          e = 2m + 2n + 3|I| + 2|J| + 1
 *
 * VVI:  d = max{1, deg g_i, deg F_lk} + 1
 * VOP:  d = max{deg h_j, deg g_i, deg df_l/dx_k} + 1   (no constant 1 in the max)
 */

#include "model.hpp"
#include "topo.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace pvvi {

using BigInt = boost::multiprecision::cpp_int;

enum class BoundFormula { vvi, vop, coste_generic };

inline const char* to_string(BoundFormula f)
{
    switch (f) {
    case BoundFormula::vvi: return "vvi";
    case BoundFormula::vop: return "vop";
    case BoundFormula::coste_generic: return "coste_generic";
    }
    return "?";
}

struct BoundReport {
    BoundFormula formula = BoundFormula::vvi;
    std::uint64_t d = 1;
    std::uint64_t exponent = 0;
    BigInt bound = 1;
    /// (m, n, |I|, |J|) for vvi/vop; (d, relations, variables) for coste_generic.
    std::vector<std::pair<std::string, std::uint64_t>> inputs;
    std::vector<std::string> warnings;
};

/// d (2d - 1)^exponent, exact.
inline BigInt component_bound(std::uint64_t d, std::uint64_t exponent)
{
    if (d < 1)
        throw std::invalid_argument("component bound needs d >= 1");
    return BigInt(d) * boost::multiprecision::pow(BigInt(2 * d - 1), static_cast<unsigned>(exponent));
}

inline std::uint64_t degree_param_vvi(const VviProblem& p)
{
    std::uint64_t top = 1;
    for (const auto& g : p.K.g)
        top = std::max(top, g.total_degree());
    for (const auto& Fl : p.F)
        for (const auto& Flk : Fl)
            top = std::max(top, Flk.total_degree());
    return top + 1;
}

/// Degree parameter for the optimization form. Can be 1 when every
/// datum is constant (e.g. affine objectives on K = R^n).
inline std::uint64_t degree_param_vop(const VopProblem& p)
{
    std::uint64_t top = 0;
    for (const auto& h : p.K.h)
        top = std::max(top, h.total_degree());
    for (const auto& g : p.K.g)
        top = std::max(top, g.total_degree());
    for (const auto& f : p.f)
        for (std::size_t k = 0; k < p.n; ++k)
            top = std::max(top, f.partial(k).total_degree());
    return top + 1;
}

inline std::uint64_t exponent_pvvi(std::size_t m, std::size_t n, std::size_t ni, std::size_t nj)
{
    return 2 * m + 2 * n + 3 * ni + 2 * nj + 1;
}

namespace detail {

inline void hypothesis_warnings(const ConstraintSet& K, std::vector<std::string>& w)
{
    for (std::size_t j = 0; j < K.h.size(); ++j)
        if (K.h[j].total_degree() > 1)
            w.push_back("unsupported hypotheses: h[" + std::to_string(j) + "] is not affine");
    if (!K.convexity_asserted)
        w.push_back("unsupported hypotheses: convexity of g not asserted");
    if (!K.acq_asserted)
        w.push_back("unsupported hypotheses: Abadie CQ not asserted");
}

} // namespace detail

inline BoundReport bound_vvi(const VviProblem& p)
{
    BoundReport r;
    r.formula = BoundFormula::vvi;
    r.d = degree_param_vvi(p);
    r.exponent = exponent_pvvi(p.m, p.n, p.K.g.size(), p.K.h.size());
    r.bound = component_bound(r.d, r.exponent);
    r.inputs = {{"m", p.m}, {"n", p.n}, {"I", p.K.g.size()}, {"J", p.K.h.size()}};
    detail::hypothesis_warnings(p.K, r.warnings);
    return r;
}

inline BoundReport bound_vop(const VopProblem& p)
{
    BoundReport r;
    r.formula = BoundFormula::vop;
    r.d = degree_param_vop(p);
    r.exponent = exponent_pvvi(p.m, p.n, p.K.g.size(), p.K.h.size());
    r.bound = component_bound(r.d, r.exponent);
    r.inputs = {{"m", p.m}, {"n", p.n}, {"I", p.K.g.size()}, {"J", p.K.h.size()}};
    detail::hypothesis_warnings(p.K, r.warnings);
    const std::uint64_t d_vvi = degree_param_vvi(derive_vvi(p));
    if (d_vvi != r.d)
        r.warnings.push_back("degree formula without the constant 1 gives d = " +
                             std::to_string(r.d) + "; the VVI form max{1, ...} + 1 gives d = " +
                             std::to_string(d_vvi) + " and bound " +
                             component_bound(d_vvi, r.exponent).str());
    r.warnings.push_back("weak Pareto claim additionally needs convex objectives (stationary "
                         "and proper stationary sets are covered without it)");
    return r;
}

inline BoundReport bound_problem(const Problem& p)
{
    if (const auto* v = std::get_if<VviProblem>(&p))
        return bound_vvi(*v);
    return bound_vop(std::get<VopProblem>(p));
}

/// Generic bound for the solution set of s polynomial relations in v variables.
inline BoundReport coste_bound(std::uint64_t d, std::uint64_t relations, std::uint64_t variables)
{
    if (d < 1 || relations < 1 || variables < 1)
        throw std::invalid_argument("coste_bound: d, relations and variables must be >= 1");
    BoundReport r;
    r.formula = BoundFormula::coste_generic;
    r.d = d;
    r.exponent = relations + variables - 1;
    r.bound = component_bound(d, r.exponent);
    r.inputs = {{"d", d}, {"relations", relations}, {"variables", variables}};
    return r;
}

struct BoundVerdict {
    bool pass = true;
    std::size_t count = 0;
    BigInt bound;
};

/// count <= bound must always hold; a failure means a bug somewhere upstream.
inline BoundVerdict check_bound(const BoundReport& report, const ComponentReport& components)
{
    return {BigInt(components.count) <= report.bound, components.count, report.bound};
}

inline nlohmann::json to_json(const BoundReport& r)
{
    nlohmann::json j;
    j["formula"] = to_string(r.formula);
    j["d"] = r.d;
    j["exponent"] = r.exponent;
    j["bound"] = r.bound.str();
    nlohmann::json in = nlohmann::json::object();
    for (const auto& [k, v] : r.inputs)
        in[k] = v;
    j["inputs"] = in;
    j["warnings"] = r.warnings;
    return j;
}

} // namespace pvvi
