#pragma once

/**
 * @file poly.hpp
 * @brief Sparse multivariate polynomials over double coefficients.
 *
 * Terms are kept in graded-lexicographic order, highest first. That order is
 * used for evaluation (so sums are reproducible bit for bit), for printing and
 * for equality. Zero coefficients are never stored; the empty term map is the
 * zero polynomial.
 *
 * Variable indices are 0-based. Printed names default to x1..xn; formula code
 * supplies its own VarTable (x, y and t blocks).
 */

#include "detail/numfmt.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pvvi {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t pos, const std::string& what)
        : std::runtime_error("syntax error at position " + std::to_string(pos) + ": " + what)
        , position(pos)
    {
    }
    std::size_t position;
};

struct Monomial {
    std::vector<std::uint32_t> exps;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps(nvars, 0) {}
    explicit Monomial(std::vector<std::uint32_t> e) : exps(std::move(e)) {}

    std::size_t nvars() const { return exps.size(); }
    std::uint64_t degree() const
    {
        return std::accumulate(exps.begin(), exps.end(), std::uint64_t{0});
    }
    bool is_constant() const
    {
        return std::all_of(exps.begin(), exps.end(), [](auto e) { return e == 0; });
    }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic order, larger monomials first.
struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const
    {
        const auto da = a.degree(), db = b.degree();
        if (da != db)
            return da > db;
        return a.exps > b.exps;
    }
};

/// Names for variable indices; used by parse and format.
class VarTable {
  public:
    VarTable() = default;
    explicit VarTable(std::vector<std::string> names) : names_(std::move(names)) {}

    /// x1..xn
    static VarTable standard(std::size_t n, std::string_view prefix = "x")
    {
        std::vector<std::string> names;
        names.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            names.push_back(std::string(prefix) + std::to_string(i + 1));
        return VarTable(std::move(names));
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<std::size_t> find(std::string_view name) const
    {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name)
                return i;
        return std::nullopt;
    }

  private:
    std::vector<std::string> names_;
};

class Polynomial {
  public:
    using TermMap = std::map<Monomial, double, GrlexGreater>;

    explicit Polynomial(std::size_t nvars = 1) : nvars_(nvars)
    {
        if (nvars == 0)
            throw DimensionError("polynomial needs at least one variable");
    }

    static Polynomial constant(std::size_t nvars, double c)
    {
        Polynomial p(nvars);
        p.add_term(Monomial(nvars), c);
        return p;
    }

    static Polynomial variable(std::size_t nvars, std::size_t k)
    {
        if (k >= nvars)
            throw DimensionError("variable index out of range");
        Polynomial p(nvars);
        Monomial m(nvars);
        m.exps[k] = 1;
        p.add_term(std::move(m), 1.0);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Adds c to the coefficient of m, dropping the term if it becomes exactly zero.
    void add_term(const Monomial& m, double c)
    {
        if (m.nvars() != nvars_)
            throw DimensionError("monomial length does not match polynomial");
        if (c == 0.0)
            return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0.0)
                terms_.erase(it);
        }
    }

    /// Coefficient of m (0 when absent).
    double coeff(const Monomial& m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? 0.0 : it->second;
    }

    /// Degree of the zero polynomial is 0.
    std::uint64_t total_degree() const
    {
        std::uint64_t d = 0;
        for (const auto& [m, c] : terms_)
            d = std::max(d, m.degree());
        return d;
    }

    double eval(std::span<const double> x) const
    {
        if (x.size() != nvars_)
            throw DimensionError("eval: point has " + std::to_string(x.size()) +
                                 " coordinates, polynomial has " + std::to_string(nvars_) +
                                 " variables");
        double sum = 0.0;
        for (const auto& [m, c] : terms_) {
            double t = c;
            for (std::size_t k = 0; k < nvars_; ++k)
                for (std::uint32_t e = 0; e < m.exps[k]; ++e)
                    t *= x[k];
            sum += t;
        }
        return sum;
    }

    double operator()(std::span<const double> x) const { return eval(x); }

    Polynomial partial(std::size_t k) const
    {
        if (k >= nvars_)
            throw DimensionError("partial: variable index " + std::to_string(k) +
                                 " out of range");
        Polynomial out(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m.exps[k] == 0)
                continue;
            Monomial d = m;
            d.exps[k] -= 1;
            out.add_term(d, c * static_cast<double>(m.exps[k]));
        }
        return out;
    }

    Polynomial scaled(double s) const
    {
        Polynomial out(nvars_);
        for (const auto& [m, c] : terms_)
            out.add_term(m, c * s);
        return out;
    }

    Polynomial& operator+=(const Polynomial& q)
    {
        check_same(q);
        for (const auto& [m, c] : q.terms_)
            add_term(m, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& q)
    {
        check_same(q);
        for (const auto& [m, c] : q.terms_)
            add_term(m, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
    friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
    friend Polynomial operator-(const Polynomial& p) { return p.scaled(-1.0); }
    friend Polynomial operator*(double s, const Polynomial& p) { return p.scaled(s); }
    friend Polynomial operator*(const Polynomial& p, double s) { return p.scaled(s); }

    friend Polynomial operator*(const Polynomial& p, const Polynomial& q)
    {
        p.check_same(q);
        Polynomial out(p.nvars_);
        for (const auto& [mp, cp] : p.terms_)
            for (const auto& [mq, cq] : q.terms_) {
                Monomial m(p.nvars_);
                for (std::size_t k = 0; k < p.nvars_; ++k)
                    m.exps[k] = mp.exps[k] + mq.exps[k];
                out.add_term(m, cp * cq);
            }
        return out;
    }

    Polynomial pow(unsigned e) const
    {
        Polynomial out = constant(nvars_, 1.0);
        for (unsigned i = 0; i < e; ++i)
            out = out * *this;
        return out;
    }

    /// Re-expresses p in a space of new_nvars variables, variable k going to map[k].
    Polynomial remap(std::size_t new_nvars, std::span<const std::size_t> map) const
    {
        if (map.size() != nvars_)
            throw DimensionError("remap: map length mismatch");
        Polynomial out(new_nvars);
        for (const auto& [m, c] : terms_) {
            Monomial r(new_nvars);
            for (std::size_t k = 0; k < nvars_; ++k) {
                if (m.exps[k] == 0)
                    continue;
                if (map[k] >= new_nvars)
                    throw DimensionError("remap: target index out of range");
                r.exps[map[k]] += m.exps[k];
            }
            out.add_term(r, c);
        }
        return out;
    }

    /// Embeds p into new_nvars variables with variable k going to offset + k.
    Polynomial shifted(std::size_t new_nvars, std::size_t offset) const
    {
        std::vector<std::size_t> map(nvars_);
        std::iota(map.begin(), map.end(), offset);
        return remap(new_nvars, map);
    }

    /// True when every variable with a nonzero exponent satisfies pred(index).
    template <class Pred>
    bool uses_only(Pred pred) const
    {
        for (const auto& [m, c] : terms_)
            for (std::size_t k = 0; k < nvars_; ++k)
                if (m.exps[k] != 0 && !pred(k))
                    return false;
        return true;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

  private:
    void check_same(const Polynomial& q) const
    {
        if (q.nvars_ != nvars_)
            throw DimensionError("polynomials live in different variable counts (" +
                                 std::to_string(nvars_) + " vs " + std::to_string(q.nvars_) +
                                 ")");
    }

    std::size_t nvars_;
    TermMap terms_;
};

/// A nonempty vector of polynomials sharing one variable count.
class PolyVector {
  public:
    PolyVector() = default;
    explicit PolyVector(std::vector<Polynomial> entries) : entries_(std::move(entries))
    {
        if (entries_.empty())
            throw DimensionError("PolyVector must be nonempty");
        for (const auto& p : entries_)
            if (p.nvars() != entries_.front().nvars())
                throw DimensionError("PolyVector entries have different variable counts");
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::size_t nvars() const { return entries_.empty() ? 0 : entries_.front().nvars(); }
    const Polynomial& operator[](std::size_t i) const { return entries_[i]; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    const std::vector<Polynomial>& entries() const { return entries_; }

    std::vector<double> eval(std::span<const double> x) const
    {
        std::vector<double> out;
        out.reserve(entries_.size());
        for (const auto& p : entries_)
            out.push_back(p.eval(x));
        return out;
    }

    friend bool operator==(const PolyVector&, const PolyVector&) = default;

  private:
    std::vector<Polynomial> entries_;
};

inline PolyVector gradient(const Polynomial& p)
{
    std::vector<Polynomial> g;
    g.reserve(p.nvars());
    for (std::size_t k = 0; k < p.nvars(); ++k)
        g.push_back(p.partial(k));
    return PolyVector(std::move(g));
}

/// ⟨a, b⟩ for equal-length polynomial sequences.
inline Polynomial dot(std::span<const Polynomial> a, std::span<const Polynomial> b)
{
    if (a.size() != b.size() || a.empty())
        throw DimensionError("dot: length mismatch");
    Polynomial out(a.front().nvars());
    for (std::size_t i = 0; i < a.size(); ++i)
        out += a[i] * b[i];
    return out;
}

// ---------------------------------------------------------------------------
// Text form

namespace detail {

class PolyParser {
  public:
    PolyParser(std::string_view text, const VarTable& vars) : s_(text), vars_(vars) {}

    Polynomial parse_all()
    {
        if (vars_.size() == 0)
            throw DimensionError("parse: empty variable table");
        skip_ws();
        if (pos_ == s_.size())
            throw ParseError(pos_, "empty expression");
        Polynomial p = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'");
        return p;
    }

  private:
    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek()
    {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Polynomial expr()
    {
        Polynomial p = term();
        for (;;) {
            if (accept('+'))
                p += term();
            else if (accept('-'))
                p -= term();
            else
                return p;
        }
    }

    Polynomial term()
    {
        Polynomial p = unary();
        for (;;) {
            if (accept('*')) {
                p = p * unary();
            } else if (accept('/')) {
                skip_ws();
                const std::size_t at = pos_;
                double d = number();
                if (d == 0.0)
                    throw ParseError(at, "division by zero");
                p = p.scaled(1.0 / d);
            } else {
                return p;
            }
        }
    }

    Polynomial unary()
    {
        if (accept('-'))
            return -unary();
        if (accept('+'))
            return unary();
        return power();
    }

    Polynomial power()
    {
        Polynomial base = primary();
        if (accept('^')) {
            skip_ws();
            const std::size_t at = pos_;
            std::size_t end = pos_;
            while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end])))
                ++end;
            if (end == pos_)
                throw ParseError(at, "expected nonnegative integer exponent");
            unsigned e = 0;
            auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + end, e);
            if (ec != std::errc{} || e > 1000)
                throw ParseError(at, "exponent out of range");
            pos_ = end;
            return base.pow(e);
        }
        return base;
    }

    Polynomial primary()
    {
        skip_ws();
        if (pos_ >= s_.size())
            throw ParseError(pos_, "unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!accept(')'))
                throw ParseError(pos_, "expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return Polynomial::constant(vars_.size(), number());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const auto name = s_.substr(start, pos_ - start);
            auto idx = vars_.find(name);
            if (!idx)
                throw ParseError(start, "unknown variable '" + std::string(name) + "'");
            return Polynomial::variable(vars_.size(), *idx);
        }
        throw ParseError(pos_, std::string("unexpected '") + c + "'");
    }

    double number()
    {
        const std::size_t start = pos_;
        std::size_t end = pos_;
        auto digit = [&](std::size_t i) {
            return i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]));
        };
        while (digit(end))
            ++end;
        if (end < s_.size() && s_[end] == '.') {
            ++end;
            while (digit(end))
                ++end;
        }
        if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < s_.size() && (s_[e] == '+' || s_[e] == '-'))
                ++e;
            if (digit(e)) {
                while (digit(e))
                    ++e;
                end = e;
            }
        }
        double v = 0.0;
        if (end == start || !parse_double(s_.substr(start, end - start), v))
            throw ParseError(start, "expected number");
        pos_ = end;
        return v;
    }

    std::string_view s_;
    const VarTable& vars_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Polynomial parse_polynomial(std::string_view text, const VarTable& vars)
{
    return detail::PolyParser(text, vars).parse_all();
}

inline Polynomial parse_polynomial(std::string_view text, std::size_t nvars)
{
    return parse_polynomial(text, VarTable::standard(nvars));
}

/// Canonical text: graded-lex order, explicit signs, `*` between factors.
inline std::string format_polynomial(const Polynomial& p, const VarTable& vars)
{
    if (vars.size() != p.nvars())
        throw DimensionError("format: variable table size mismatch");
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        const double mag = std::abs(c);
        if (first) {
            if (c < 0)
                out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        std::string factors;
        for (std::size_t k = 0; k < m.nvars(); ++k) {
            if (m.exps[k] == 0)
                continue;
            if (!factors.empty())
                factors += "*";
            factors += vars.name(k);
            if (m.exps[k] > 1)
                factors += "^" + std::to_string(m.exps[k]);
        }
        if (factors.empty())
            out += detail::format_double(mag);
        else if (mag == 1.0)
            out += factors;
        else
            out += detail::format_double(mag) + "*" + factors;
    }
    return out;
}

inline std::string format_polynomial(const Polynomial& p)
{
    return format_polynomial(p, VarTable::standard(p.nvars()));
}

} // namespace pvvi
