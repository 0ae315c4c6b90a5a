#pragma once

/**
 * @file model.hpp
 * @brief Problem instances: polynomial VVI and VOP over K = {g <= 0, h = 0}.
 *
 * Convexity of the g_i and the Abadie constraint qualification are user
 * assertions. validate() warns when they are absent and can probe convexity
 * numerically (a negative Hessian eigenvalue at a random point); it never
 * blocks on either.
 */

#include "poly.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace pvvi {

struct ConstraintSet {
    std::size_t n = 1;
    std::vector<Polynomial> g; ///< g_i(x) <= 0
    std::vector<Polynomial> h; ///< h_j(x) = 0
    bool convexity_asserted = false;
    bool acq_asserted = false;

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

struct VviProblem {
    std::size_t n = 1;
    std::size_t m = 1;
    std::vector<PolyVector> F;
    ConstraintSet K;

    friend bool operator==(const VviProblem&, const VviProblem&) = default;
};

struct VopProblem {
    std::size_t n = 1;
    std::size_t m = 1;
    std::vector<Polynomial> f;
    ConstraintSet K;

    friend bool operator==(const VopProblem&, const VopProblem&) = default;
};

using Problem = std::variant<VviProblem, VopProblem>;

/// F_l = grad f_l, same K.
inline VviProblem derive_vvi(const VopProblem& vop)
{
    VviProblem p;
    p.n = vop.n;
    p.m = vop.m;
    p.K = vop.K;
    p.F.reserve(vop.f.size());
    for (const auto& fl : vop.f)
        p.F.push_back(gradient(fl));
    return p;
}

struct Finding {
    enum class Severity { error, warning };
    Severity severity;
    std::string path;
    std::string message;

    bool is_error() const { return severity == Severity::error; }
    friend bool operator==(const Finding&, const Finding&) = default;
};

inline bool has_errors(const std::vector<Finding>& fs)
{
    return std::any_of(fs.begin(), fs.end(), [](const Finding& f) { return f.is_error(); });
}

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::vector<Finding>& fs)
        : std::runtime_error(describe(fs)), findings(fs)
    {
    }
    std::vector<Finding> findings;

  private:
    static std::string describe(const std::vector<Finding>& fs)
    {
        std::string s = "invalid problem";
        for (const auto& f : fs)
            if (f.is_error())
                s += "; " + f.path + ": " + f.message;
        return s;
    }
};

struct ValidateOptions {
    bool convexity_probe = true;
    std::size_t probe_samples = 200;
    double probe_box = 10.0;
    std::uint64_t probe_seed = 42;
};

namespace detail {

inline void check_nvars(const Polynomial& p, std::size_t n, const std::string& path,
                        std::vector<Finding>& out)
{
    if (p.nvars() != n)
        out.push_back({Finding::Severity::error, path,
                       "has " + std::to_string(p.nvars()) + " variables, expected " +
                           std::to_string(n)});
}

/// Smallest Hessian eigenvalue over random samples; returns the worst point found.
inline std::optional<std::pair<double, std::vector<double>>>
probe_concavity(const Polynomial& g, const ValidateOptions& opt)
{
    const std::size_t n = g.nvars();
    if (g.total_degree() <= 1)
        return std::nullopt;
    std::vector<std::vector<Polynomial>> hess(n);
    for (std::size_t a = 0; a < n; ++a) {
        const Polynomial ga = g.partial(a);
        for (std::size_t b = 0; b < n; ++b)
            hess[a].push_back(ga.partial(b));
    }
    std::mt19937_64 rng(opt.probe_seed);
    std::uniform_real_distribution<double> u(-opt.probe_box, opt.probe_box);
    std::vector<double> x(n);
    Eigen::MatrixXd H(n, n);
    double worst = 0.0;
    std::vector<double> worst_x;
    for (std::size_t s = 0; s < opt.probe_samples; ++s) {
        for (auto& v : x)
            v = u(rng);
        double scale = 1.0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                H(a, b) = hess[a][b].eval(x);
                scale = std::max(scale, std::abs(H(a, b)));
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        if (lo < -1e-9 * scale && lo < worst) {
            worst = lo;
            worst_x = x;
        }
    }
    if (worst_x.empty())
        return std::nullopt;
    return std::make_pair(worst, worst_x);
}

inline void validate_constraints(const ConstraintSet& K, std::size_t n, const ValidateOptions& opt,
                                 std::vector<Finding>& out)
{
    using S = Finding::Severity;
    if (K.n != n)
        out.push_back({S::error, "K.n", "constraint dimension " + std::to_string(K.n) +
                                             " differs from n = " + std::to_string(n)});
    for (std::size_t i = 0; i < K.g.size(); ++i)
        check_nvars(K.g[i], n, "g[" + std::to_string(i) + "]", out);
    for (std::size_t j = 0; j < K.h.size(); ++j) {
        const std::string path = "h[" + std::to_string(j) + "]";
        check_nvars(K.h[j], n, path, out);
        if (K.h[j].total_degree() > 1)
            out.push_back({S::error, path, "h_j must be affine (degree " +
                                               std::to_string(K.h[j].total_degree()) + ")"});
    }
    if (!K.convexity_asserted)
        out.push_back({S::warning, "convex",
                       "convexity of g not asserted; KKT equivalence and component bounds are "
                       "not covered by the theory"});
    if (!K.acq_asserted)
        out.push_back({S::warning, "acq",
                       "Abadie CQ not asserted; computed points are KKT points only"});
    if (opt.convexity_probe)
        for (std::size_t i = 0; i < K.g.size(); ++i) {
            if (K.g[i].nvars() != n)
                continue;
            if (auto bad = probe_concavity(K.g[i], opt)) {
                std::ostringstream msg;
                msg << "convexity probe: Hessian eigenvalue " << bad->first << " at (";
                for (std::size_t k = 0; k < bad->second.size(); ++k)
                    msg << (k ? ", " : "") << bad->second[k];
                msg << "); g_i is not convex";
                out.push_back({S::warning, "g[" + std::to_string(i) + "]", msg.str()});
            }
        }
}

} // namespace detail

inline std::vector<Finding> validate(const VviProblem& p, const ValidateOptions& opt = {})
{
    using S = Finding::Severity;
    std::vector<Finding> out;
    if (p.n == 0)
        out.push_back({S::error, "n", "n must be positive"});
    if (p.m == 0)
        out.push_back({S::error, "m", "m must be positive"});
    if (p.F.size() != p.m)
        out.push_back({S::error, "F", "expected " + std::to_string(p.m) + " operators, got " +
                                          std::to_string(p.F.size())});
    for (std::size_t l = 0; l < p.F.size(); ++l) {
        if (p.F[l].size() != p.n)
            out.push_back({S::error, "F[" + std::to_string(l) + "]",
                           "expected " + std::to_string(p.n) + " entries, got " +
                               std::to_string(p.F[l].size())});
        for (std::size_t k = 0; k < p.F[l].size(); ++k)
            detail::check_nvars(p.F[l][k], p.n,
                                "F[" + std::to_string(l) + "][" + std::to_string(k) + "]", out);
    }
    detail::validate_constraints(p.K, p.n, opt, out);
    return out;
}

inline std::vector<Finding> validate(const VopProblem& p, const ValidateOptions& opt = {})
{
    using S = Finding::Severity;
    std::vector<Finding> out;
    if (p.n == 0)
        out.push_back({S::error, "n", "n must be positive"});
    if (p.m == 0)
        out.push_back({S::error, "m", "m must be positive"});
    if (p.f.size() != p.m)
        out.push_back({S::error, "f", "expected " + std::to_string(p.m) + " objectives, got " +
                                          std::to_string(p.f.size())});
    for (std::size_t l = 0; l < p.f.size(); ++l)
        detail::check_nvars(p.f[l], p.n, "f[" + std::to_string(l) + "]", out);
    detail::validate_constraints(p.K, p.n, opt, out);
    return out;
}

inline std::vector<Finding> validate(const Problem& p, const ValidateOptions& opt = {})
{
    return std::visit([&](const auto& q) { return validate(q, opt); }, p);
}

// ---------------------------------------------------------------------------
// JSON problem files

struct SchemaError : std::runtime_error {
    SchemaError(std::string field, const std::string& msg)
        : std::runtime_error(field + ": " + msg), path(std::move(field))
    {
    }
    std::string path;
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key))
        throw SchemaError(key, "missing field");
    return j.at(key);
}

inline std::size_t read_positive(const nlohmann::json& j, const char* key)
{
    const auto& v = require(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw SchemaError(key, "expected positive integer");
    return v.get<std::size_t>();
}

inline Polynomial read_poly(const nlohmann::json& v, std::size_t n, const std::string& path)
{
    if (!v.is_string())
        throw SchemaError(path, "expected polynomial string");
    try {
        return parse_polynomial(v.get<std::string>(), n);
    } catch (const ParseError& e) {
        throw SchemaError(path, e.what());
    }
}

inline std::vector<Polynomial> read_poly_list(const nlohmann::json& j, const char* key,
                                              std::size_t n)
{
    std::vector<Polynomial> out;
    if (!j.contains(key))
        return out;
    const auto& arr = j.at(key);
    if (!arr.is_array())
        throw SchemaError(key, "expected array of polynomial strings");
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(read_poly(arr[i], n, std::string(key) + "[" + std::to_string(i) + "]"));
    return out;
}

inline bool read_bool(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key))
        return false;
    if (!j.at(key).is_boolean())
        throw SchemaError(key, "expected boolean");
    return j.at(key).get<bool>();
}

inline nlohmann::json poly_list_json(const std::vector<Polynomial>& ps)
{
    auto arr = nlohmann::json::array();
    for (const auto& p : ps)
        arr.push_back(format_polynomial(p));
    return arr;
}

} // namespace detail

inline Problem problem_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw SchemaError("$", "expected JSON object");
    const auto& kind = detail::require(j, "kind");
    if (!kind.is_string())
        throw SchemaError("kind", "expected \"vvi\" or \"vop\"");
    const std::size_t n = detail::read_positive(j, "n");
    const std::size_t m = detail::read_positive(j, "m");

    ConstraintSet K;
    K.n = n;
    K.g = detail::read_poly_list(j, "g", n);
    K.h = detail::read_poly_list(j, "h", n);
    K.convexity_asserted = detail::read_bool(j, "convex");
    K.acq_asserted = detail::read_bool(j, "acq");

    const auto k = kind.get<std::string>();
    if (k == "vvi") {
        const auto& F = detail::require(j, "F");
        if (!F.is_array() || F.size() != m)
            throw SchemaError("F", "expected array of " + std::to_string(m) + " operators");
        VviProblem p{n, m, {}, std::move(K)};
        for (std::size_t l = 0; l < m; ++l) {
            const std::string path = "F[" + std::to_string(l) + "]";
            if (!F[l].is_array() || F[l].size() != n)
                throw SchemaError(path, "expected array of " + std::to_string(n) + " polynomials");
            std::vector<Polynomial> comps;
            for (std::size_t c = 0; c < n; ++c)
                comps.push_back(
                    detail::read_poly(F[l][c], n, path + "[" + std::to_string(c) + "]"));
            p.F.emplace_back(std::move(comps));
        }
        return p;
    }
    if (k == "vop") {
        const auto& f = detail::require(j, "f");
        if (!f.is_array() || f.size() != m)
            throw SchemaError("f", "expected array of " + std::to_string(m) + " polynomials");
        VopProblem p{n, m, {}, std::move(K)};
        for (std::size_t l = 0; l < m; ++l)
            p.f.push_back(detail::read_poly(f[l], n, "f[" + std::to_string(l) + "]"));
        return p;
    }
    throw SchemaError("kind", "expected \"vvi\" or \"vop\", got \"" + k + "\"");
}

inline nlohmann::json to_json(const Problem& problem)
{
    nlohmann::json j;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            j["kind"] = std::is_same_v<T, VviProblem> ? "vvi" : "vop";
            j["n"] = p.n;
            j["m"] = p.m;
            if constexpr (std::is_same_v<T, VviProblem>) {
                auto F = nlohmann::json::array();
                for (const auto& Fl : p.F)
                    F.push_back(detail::poly_list_json(Fl.entries()));
                j["F"] = F;
            } else {
                j["f"] = detail::poly_list_json(p.f);
            }
            j["g"] = detail::poly_list_json(p.K.g);
            j["h"] = detail::poly_list_json(p.K.h);
            j["convex"] = p.K.convexity_asserted;
            j["acq"] = p.K.acq_asserted;
        },
        problem);
    return j;
}

inline Problem load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open problem file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return problem_from_json(j);
}

inline void save_problem(const Problem& p, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write problem file '" + path + "'");
    out << to_json(p).dump(2) << "\n";
}

/// FNV-1a over the canonical JSON text, as 16 hex digits.
inline std::string problem_hash(const Problem& p)
{
    const std::string text = to_json(p).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

/// The VVI view of either kind (VOP goes through the gradient derivation).
inline VviProblem to_vvi(const Problem& p)
{
    if (const auto* v = std::get_if<VviProblem>(&p))
        return *v;
    return derive_vvi(std::get<VopProblem>(p));
}

} // namespace pvvi
