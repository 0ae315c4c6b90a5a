#pragma once

/**
 * @file formula.hpp
 * @brief First-order formulas over polynomial sign conditions, builders for
 * the solution-set definitions of polynomial VVI / VOP instances, and
 * exporters for external quantifier-elimination or SMT tools.
 *
 * Variables live in one flat space laid out as
 *
 *     x1..xn | y1..yn | t1..tm
 *
 * so every atom polynomial has 2n + m variables. Quantifiers bind whole
 * blocks (X, Y or T).
 *
 * Text dialect:
 *
 *     # comment lines
 *     formula <name> n=<n> m=<m> free=<blocks>
 *     F := ⊤ | ⊥ | [<poly> <rel> 0] | ¬F | (F ∧ F ...) | (F ∨ F ...)
 *        | (∧ F) | (∨ F) | ∀ v1, v2 . F | ∃ v1, v2 . F
 *
 * with rel one of > >= = < <=, and the variable list of a quantifier naming
 * its whole block. ⊤ and ⊥ are the empty conjunction and disjunction.
 */

#include "model.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pvvi {

enum class Relation { gt, ge, eq, lt, le };

inline const char* to_string(Relation r)
{
    switch (r) {
    case Relation::gt: return ">";
    case Relation::ge: return ">=";
    case Relation::eq: return "=";
    case Relation::lt: return "<";
    case Relation::le: return "<=";
    }
    return "?";
}

inline bool holds(Relation r, double v)
{
    switch (r) {
    case Relation::gt: return v > 0;
    case Relation::ge: return v >= 0;
    case Relation::eq: return v == 0;
    case Relation::lt: return v < 0;
    case Relation::le: return v <= 0;
    }
    return false;
}

enum class VarBlock : char { X = 'x', Y = 'y', T = 't' };

struct Signature {
    std::size_t n = 1;
    std::size_t m = 0;

    std::size_t nvars() const { return 2 * n + m; }
    std::size_t offset(VarBlock b) const
    {
        switch (b) {
        case VarBlock::X: return 0;
        case VarBlock::Y: return n;
        case VarBlock::T: return 2 * n;
        }
        return 0;
    }
    std::size_t size(VarBlock b) const { return b == VarBlock::T ? m : n; }
    VarBlock block_of(std::size_t var) const
    {
        return var < n ? VarBlock::X : var < 2 * n ? VarBlock::Y : VarBlock::T;
    }
    VarTable table() const
    {
        std::vector<std::string> names;
        for (auto b : {VarBlock::X, VarBlock::Y, VarBlock::T})
            for (std::size_t i = 0; i < size(b); ++i)
                names.push_back(std::string(1, static_cast<char>(b)) + std::to_string(i + 1));
        return VarTable(std::move(names));
    }
    friend bool operator==(const Signature&, const Signature&) = default;
};

struct Formula {
    enum class Kind { atom, conj, disj, neg, forall, exists };

    Kind kind = Kind::conj;
    Polynomial poly;                ///< atom only
    Relation rel = Relation::ge;    ///< atom only
    VarBlock block = VarBlock::Y;   ///< quantifiers only
    std::vector<Formula> children;

    static Formula Atom(Polynomial p, Relation r)
    {
        Formula f;
        f.kind = Kind::atom;
        f.poly = std::move(p);
        f.rel = r;
        return f;
    }
    static Formula And(std::vector<Formula> cs)
    {
        Formula f;
        f.kind = Kind::conj;
        f.children = std::move(cs);
        return f;
    }
    static Formula Or(std::vector<Formula> cs)
    {
        Formula f;
        f.kind = Kind::disj;
        f.children = std::move(cs);
        return f;
    }
    static Formula Not(Formula c)
    {
        Formula f;
        f.kind = Kind::neg;
        f.children.push_back(std::move(c));
        return f;
    }
    static Formula ForAll(VarBlock b, Formula c)
    {
        Formula f;
        f.kind = Kind::forall;
        f.block = b;
        f.children.push_back(std::move(c));
        return f;
    }
    static Formula Exists(VarBlock b, Formula c)
    {
        Formula f = ForAll(b, std::move(c));
        f.kind = Kind::exists;
        return f;
    }
    static Formula True() { return And({}); }
    static Formula False() { return Or({}); }

    bool is_true() const { return kind == Kind::conj && children.empty(); }
    bool is_false() const { return kind == Kind::disj && children.empty(); }
    bool is_quantifier() const { return kind == Kind::forall || kind == Kind::exists; }
    const Formula& child() const { return children.at(0); }

    friend bool operator==(const Formula& a, const Formula& b)
    {
        if (a.kind != b.kind || a.children != b.children)
            return false;
        if (a.kind == Kind::atom)
            return a.rel == b.rel && a.poly == b.poly;
        if (a.is_quantifier())
            return a.block == b.block;
        return true;
    }
};

/// A formula together with its variable layout and free blocks.
struct FirstOrderFormula {
    std::string name;
    Signature sig;
    std::vector<VarBlock> free;
    Formula root;
    std::vector<std::string> notes;

    friend bool operator==(const FirstOrderFormula& a, const FirstOrderFormula& b)
    {
        return a.name == b.name && a.sig == b.sig && a.free == b.free && a.root == b.root;
    }
};

// ---------------------------------------------------------------------------
// Simplifying constructors: truth/falsity absorb, single children collapse.

inline Formula make_and(std::vector<Formula> cs)
{
    std::vector<Formula> kept;
    for (auto& c : cs) {
        if (c.is_true())
            continue;
        if (c.is_false())
            return Formula::False();
        kept.push_back(std::move(c));
    }
    if (kept.size() == 1)
        return std::move(kept.front());
    return Formula::And(std::move(kept));
}

inline Formula make_or(std::vector<Formula> cs)
{
    std::vector<Formula> kept;
    for (auto& c : cs) {
        if (c.is_false())
            continue;
        if (c.is_true())
            return Formula::True();
        kept.push_back(std::move(c));
    }
    if (kept.size() == 1)
        return std::move(kept.front());
    return Formula::Or(std::move(kept));
}

inline Formula make_not(Formula c)
{
    if (c.is_true())
        return Formula::False();
    if (c.is_false())
        return Formula::True();
    return Formula::Not(std::move(c));
}

// ---------------------------------------------------------------------------
// Structure queries

template <class Fn>
void visit_atoms(const Formula& f, Fn&& fn)
{
    if (f.kind == Formula::Kind::atom) {
        fn(f);
        return;
    }
    for (const auto& c : f.children)
        visit_atoms(c, fn);
}

inline std::size_t count_atoms(const Formula& f)
{
    std::size_t c = 0;
    visit_atoms(f, [&](const Formula&) { ++c; });
    return c;
}

inline std::size_t count_atoms(const Formula& f, Relation r)
{
    std::size_t c = 0;
    visit_atoms(f, [&](const Formula& a) { c += a.rel == r; });
    return c;
}

inline bool is_quantifier_free(const Formula& f)
{
    if (f.is_quantifier())
        return false;
    return std::all_of(f.children.begin(), f.children.end(),
                       [](const Formula& c) { return is_quantifier_free(c); });
}

/// Quantifier prefix encountered along the leftmost-outermost walk, e.g. "∃T ∀Y".
inline std::vector<std::pair<Formula::Kind, VarBlock>> quantifiers(const Formula& f)
{
    std::vector<std::pair<Formula::Kind, VarBlock>> out;
    auto rec = [&](auto&& self, const Formula& g) -> void {
        if (g.is_quantifier())
            out.emplace_back(g.kind, g.block);
        for (const auto& c : g.children)
            self(self, c);
    };
    rec(rec, f);
    return out;
}

/// Drops every quantifier node, keeping its body.
inline Formula strip_quantifiers(const Formula& f)
{
    if (f.is_quantifier())
        return strip_quantifiers(f.child());
    Formula g = f;
    for (auto& c : g.children)
        c = strip_quantifiers(c);
    return g;
}

/// Every variable used in an atom belongs to a free block or an enclosing quantifier.
inline bool well_scoped(const FirstOrderFormula& ff)
{
    auto rec = [&](auto&& self, const Formula& f, std::vector<VarBlock>& bound) -> bool {
        if (f.kind == Formula::Kind::atom)
            return f.poly.uses_only([&](std::size_t v) {
                const VarBlock b = ff.sig.block_of(v);
                return std::find(bound.begin(), bound.end(), b) != bound.end();
            });
        if (f.is_quantifier()) {
            bound.push_back(f.block);
            const bool ok = self(self, f.child(), bound);
            bound.pop_back();
            return ok;
        }
        return std::all_of(f.children.begin(), f.children.end(),
                           [&](const Formula& c) { return self(self, c, bound); });
    };
    std::vector<VarBlock> bound = ff.free;
    return rec(rec, ff.root, bound);
}

/// Rewrites >=, <=, < into the primitive relations > and = (p >= 0 iff not(-p > 0)).
inline Formula normalize(const Formula& f)
{
    if (f.kind != Formula::Kind::atom) {
        Formula g = f;
        for (auto& c : g.children)
            c = normalize(c);
        return g;
    }
    switch (f.rel) {
    case Relation::gt:
    case Relation::eq: return f;
    case Relation::ge: return Formula::Not(Formula::Atom(-f.poly, Relation::gt));
    case Relation::le: return Formula::Not(Formula::Atom(f.poly, Relation::gt));
    case Relation::lt: return Formula::Atom(-f.poly, Relation::gt);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Evaluation

struct UnboundVariable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quantifier-free evaluation; values is indexed by the flat variable layout,
/// NaN marking variables without a value.
inline bool eval_qf(const Formula& f, std::span<const double> values, const VarTable* names = nullptr)
{
    switch (f.kind) {
    case Formula::Kind::atom: {
        for (const auto& [mono, c] : f.poly.terms())
            for (std::size_t v = 0; v < mono.nvars(); ++v)
                if (mono.exps[v] != 0 && std::isnan(values[v]))
                    throw UnboundVariable("unbound variable " +
                                          (names ? names->name(v) : "#" + std::to_string(v)));
        return holds(f.rel, f.poly.eval(values));
    }
    case Formula::Kind::conj:
        for (const auto& c : f.children)
            if (!eval_qf(c, values, names))
                return false;
        return true;
    case Formula::Kind::disj:
        for (const auto& c : f.children)
            if (eval_qf(c, values, names))
                return true;
        return false;
    case Formula::Kind::neg: return !eval_qf(f.child(), values, names);
    case Formula::Kind::forall:
    case Formula::Kind::exists:
        throw std::invalid_argument("eval_qf: formula has quantifiers");
    }
    return false;
}

inline bool eval_qf(const FirstOrderFormula& ff, const std::map<std::string, double>& assignment)
{
    const VarTable names = ff.sig.table();
    std::vector<double> values(names.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& [name, v] : assignment) {
        auto idx = names.find(name);
        if (!idx)
            throw std::invalid_argument("eval_qf: unknown variable " + name);
        values[*idx] = v;
    }
    return eval_qf(ff.root, values, &names);
}

// ---------------------------------------------------------------------------
// Builders

namespace detail {

inline Formula qf_of_K_in(const ConstraintSet& K, const Signature& sig, VarBlock b)
{
    std::vector<Formula> atoms;
    const std::size_t N = sig.nvars(), off = sig.offset(b);
    for (const auto& g : K.g)
        atoms.push_back(Formula::Atom(g.shifted(N, off), Relation::le));
    for (const auto& h : K.h)
        atoms.push_back(Formula::Atom(h.shifted(N, off), Relation::eq));
    if (atoms.size() == 1)
        return std::move(atoms.front());
    return Formula::And(std::move(atoms));
}

/// <F_l(X), Y - X> as a polynomial in the flat layout.
inline Polynomial vi_product(const PolyVector& Fl, const Signature& sig)
{
    const std::size_t N = sig.nvars();
    Polynomial out(N);
    for (std::size_t k = 0; k < sig.n; ++k)
        out += Fl[k].shifted(N, 0) *
               (Polynomial::variable(N, sig.n + k) - Polynomial::variable(N, k));
    return out;
}

/// <sum_l t_l F_l(X), Y - X>
inline Polynomial weighted_vi_product(const VviProblem& p, const Signature& sig)
{
    const std::size_t N = sig.nvars();
    Polynomial out(N);
    for (std::size_t l = 0; l < p.m; ++l)
        out += Polynomial::variable(N, sig.offset(VarBlock::T) + l) * vi_product(p.F[l], sig);
    return out;
}

/// Q_K(X) ∧ ∀Y ([Q_K(Y) ∧ inner] ∨ ¬Q_K(Y))
inline Formula solution_shape(const ConstraintSet& K, const Signature& sig, Formula inner)
{
    Formula forall_y = Formula::ForAll(
        VarBlock::Y,
        make_or({make_and({qf_of_K_in(K, sig, VarBlock::Y), std::move(inner)}),
                 make_not(qf_of_K_in(K, sig, VarBlock::Y))}));
    return make_and({qf_of_K_in(K, sig, VarBlock::X), std::move(forall_y)});
}

inline Formula simplex_constraint(const Signature& sig, bool relative_interior)
{
    const std::size_t N = sig.nvars(), off = sig.offset(VarBlock::T);
    std::vector<Formula> atoms;
    Polynomial sum = Polynomial::constant(N, -1.0);
    for (std::size_t l = 0; l < sig.m; ++l) {
        const Polynomial t = Polynomial::variable(N, off + l);
        atoms.push_back(Formula::Atom(t, relative_interior ? Relation::gt : Relation::ge));
        sum += t;
    }
    atoms.push_back(Formula::Atom(sum, Relation::eq));
    return Formula::And(std::move(atoms));
}

inline void require_builder_input(const VviProblem& p)
{
    ValidateOptions opt;
    opt.convexity_probe = false;
    auto fs = validate(p, opt);
    if (has_errors(fs))
        throw ValidationError(fs);
}

} // namespace detail

/// Conjunction of g_i(x) <= 0 and h_j(x) = 0; the empty conjunction for K = R^n.
inline FirstOrderFormula qf_of_K(const ConstraintSet& K)
{
    const Signature sig{K.n, 0};
    return {"Q_K", sig, {VarBlock::X}, detail::qf_of_K_in(K, sig, VarBlock::X), {}};
}

inline FirstOrderFormula formula_weak(const VviProblem& p)
{
    detail::require_builder_input(p);
    const Signature sig{p.n, p.m};
    std::vector<Formula> half_spaces;
    for (const auto& Fl : p.F)
        half_spaces.push_back(Formula::Atom(detail::vi_product(Fl, sig), Relation::ge));
    return {"weak",
            sig,
            {VarBlock::X},
            detail::solution_shape(p.K, sig, make_or(std::move(half_spaces))),
            {"weak Pareto solutions: some <F_l(x), y - x> >= 0 for every feasible y"}};
}

inline FirstOrderFormula formula_pareto(const VviProblem& p)
{
    detail::require_builder_input(p);
    const Signature sig{p.n, p.m};
    std::vector<Formula> strict, equal;
    for (const auto& Fl : p.F) {
        Polynomial v = detail::vi_product(Fl, sig);
        strict.push_back(Formula::Atom(v, Relation::gt));
        equal.push_back(Formula::Atom(std::move(v), Relation::eq));
    }
    Formula A = strict.size() == 1 ? std::move(strict.front()) : Formula::Or(std::move(strict));
    Formula B = equal.size() == 1 ? std::move(equal.front()) : Formula::And(std::move(equal));
    return {"pareto",
            sig,
            {VarBlock::X},
            detail::solution_shape(p.K, sig, Formula::Or({std::move(A), std::move(B)})),
            {"Pareto solutions: A(X,Y) = some product > 0, B(X,Y) = all products = 0"}};
}

inline FirstOrderFormula formula_proper(const VviProblem& p)
{
    detail::require_builder_input(p);
    const Signature sig{p.n, p.m};
    Formula C = Formula::Atom(detail::weighted_vi_product(p, sig), Relation::ge);
    Formula shape = detail::solution_shape(p.K, sig, std::move(C));
    // shape = Q_K(X) ∧ ∀Y(...), or just ∀Y(...) when K = R^n
    std::vector<Formula> parts;
    if (shape.kind == Formula::Kind::conj) {
        parts.push_back(shape.children[0]);
        parts.push_back(detail::simplex_constraint(sig, true));
        parts.push_back(shape.children[1]);
    } else {
        parts.push_back(detail::simplex_constraint(sig, true));
        parts.push_back(std::move(shape));
    }
    return {"proper",
            sig,
            {VarBlock::X},
            Formula::Exists(VarBlock::T, Formula::And(std::move(parts))),
            {"proper Pareto solutions: some t in ri(simplex) with <sum t_l F_l(x), y - x> >= 0 "
             "for every feasible y",
             "reading: the existential over t scopes over the universal-y part as well, since "
             "t occurs in it; the bracketed form [∃t Q(t)] ∧ [∀y ...] would leave t unbound"}};
}

inline FirstOrderFormula formula_graph(const VviProblem& p)
{
    detail::require_builder_input(p);
    const Signature sig{p.n, p.m};
    Formula C = Formula::Atom(detail::weighted_vi_product(p, sig), Relation::ge);
    Formula shape = detail::solution_shape(p.K, sig, std::move(C));
    std::vector<Formula> parts;
    if (shape.kind == Formula::Kind::conj) {
        parts.push_back(shape.children[0]);
        parts.push_back(detail::simplex_constraint(sig, false));
        parts.push_back(shape.children[1]);
    } else {
        parts.push_back(detail::simplex_constraint(sig, false));
        parts.push_back(std::move(shape));
    }
    return {"graph",
            sig,
            {VarBlock::T, VarBlock::X},
            Formula::And(std::move(parts)),
            {"graph of the basic multifunction: (t, x) with t in the simplex and x in Sol(VI)_t"}};
}

namespace detail {

inline std::vector<Polynomial> objective_differences(const VopProblem& p, const Signature& sig)
{
    ValidateOptions opt;
    opt.convexity_probe = false;
    auto fs = validate(p, opt);
    if (has_errors(fs))
        throw ValidationError(fs);
    std::vector<Polynomial> out;
    const std::size_t N = sig.nvars();
    for (const auto& f : p.f)
        out.push_back(f.shifted(N, sig.offset(VarBlock::Y)) - f.shifted(N, 0));
    return out;
}

} // namespace detail

inline FirstOrderFormula formula_vop_weak(const VopProblem& p)
{
    const Signature sig{p.n, p.m};
    std::vector<Formula> atoms;
    for (auto& d : detail::objective_differences(p, sig))
        atoms.push_back(Formula::Atom(std::move(d), Relation::ge));
    return {"vop_weak",
            sig,
            {VarBlock::X},
            detail::solution_shape(p.K, sig, make_or(std::move(atoms))),
            {"weak Pareto solutions of the optimization problem: some f_l(y) - f_l(x) >= 0"}};
}

inline FirstOrderFormula formula_vop_pareto(const VopProblem& p)
{
    const Signature sig{p.n, p.m};
    std::vector<Formula> strict, equal;
    for (auto& d : detail::objective_differences(p, sig)) {
        strict.push_back(Formula::Atom(d, Relation::gt));
        equal.push_back(Formula::Atom(std::move(d), Relation::eq));
    }
    Formula A = strict.size() == 1 ? std::move(strict.front()) : Formula::Or(std::move(strict));
    Formula B = equal.size() == 1 ? std::move(equal.front()) : Formula::And(std::move(equal));
    return {"vop_pareto",
            sig,
            {VarBlock::X},
            detail::solution_shape(p.K, sig, Formula::Or({std::move(A), std::move(B)})),
            {"Pareto solutions of the optimization problem"}};
}

// ---------------------------------------------------------------------------
// Text dialect

namespace detail {

inline std::string block_names(const Signature& sig, VarBlock b, const char* sep)
{
    std::string s;
    for (std::size_t i = 0; i < sig.size(b); ++i)
        s += (i ? sep : "") + std::string(1, static_cast<char>(b)) + std::to_string(i + 1);
    return s;
}

inline void write_text(std::ostream& os, const Formula& f, const Signature& sig,
                       const VarTable& names, int depth)
{
    const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
    using K = Formula::Kind;
    switch (f.kind) {
    case K::atom:
        os << pad << "[" << format_polynomial(f.poly, names) << " " << to_string(f.rel) << " 0]";
        return;
    case K::neg:
        os << pad << "¬\n";
        write_text(os, f.child(), sig, names, depth + 1);
        return;
    case K::forall:
    case K::exists:
        os << pad << (f.kind == K::forall ? "∀ " : "∃ ") << block_names(sig, f.block, ", ")
           << " .\n";
        write_text(os, f.child(), sig, names, depth + 1);
        return;
    case K::conj:
    case K::disj: {
        const char* op = f.kind == K::conj ? "∧" : "∨";
        if (f.children.empty()) {
            os << pad << (f.kind == K::conj ? "⊤" : "⊥");
            return;
        }
        if (f.children.size() == 1) {
            os << pad << "(" << op << "\n";
            write_text(os, f.child(), sig, names, depth + 1);
            os << "\n" << pad << ")";
            return;
        }
        os << pad << "(\n";
        for (std::size_t i = 0; i < f.children.size(); ++i) {
            if (i)
                os << "\n" << pad << op << "\n";
            write_text(os, f.children[i], sig, names, depth + 1);
        }
        os << "\n" << pad << ")";
        return;
    }
    }
}

class TextParser {
  public:
    TextParser(std::string_view s, const Signature& sig) : s_(s), sig_(sig), names_(sig.table()) {}

    Formula parse_formula()
    {
        skip_ws();
        if (eat("⊤"))
            return Formula::True();
        if (eat("⊥"))
            return Formula::False();
        if (eat("¬"))
            return Formula::Not(parse_formula());
        if (eat("∀"))
            return quantifier(Formula::Kind::forall);
        if (eat("∃"))
            return quantifier(Formula::Kind::exists);
        if (eat("["))
            return atom();
        if (eat("(")) {
            skip_ws();
            for (const auto& [tok, kind] : {std::pair{"∧", Formula::Kind::conj},
                                            std::pair{"∨", Formula::Kind::disj}})
                if (eat(tok)) {
                    Formula f;
                    f.kind = kind;
                    f.children.push_back(parse_formula());
                    expect(")");
                    return f;
                }
            Formula first = parse_formula();
            skip_ws();
            Formula f;
            if (peek("∧"))
                f.kind = Formula::Kind::conj;
            else if (peek("∨"))
                f.kind = Formula::Kind::disj;
            else
                fail("expected ∧ or ∨");
            const char* op = f.kind == Formula::Kind::conj ? "∧" : "∨";
            f.children.push_back(std::move(first));
            while (eat(op))
                f.children.push_back(parse_formula());
            expect(")");
            return f;
        }
        fail("expected formula");
    }

    void finish()
    {
        skip_ws();
        if (pos_ != s_.size())
            fail("trailing input");
    }

  private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool peek(std::string_view tok)
    {
        skip_ws();
        return s_.substr(pos_, tok.size()) == tok;
    }
    bool eat(std::string_view tok)
    {
        if (!peek(tok))
            return false;
        pos_ += tok.size();
        return true;
    }
    void expect(std::string_view tok)
    {
        if (!eat(tok))
            fail("expected '" + std::string(tok) + "'");
    }

    Formula quantifier(Formula::Kind kind)
    {
        std::vector<std::string> vars;
        for (;;) {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (start == pos_)
                fail("expected variable name");
            vars.emplace_back(s_.substr(start, pos_ - start));
            if (!eat(","))
                break;
        }
        expect(".");
        const char sym = vars.front().front();
        if (sym != 'x' && sym != 'y' && sym != 't')
            fail("quantified variables must belong to the x, y or t block");
        const auto block = static_cast<VarBlock>(sym);
        std::vector<std::string> want;
        for (std::size_t i = 0; i < sig_.size(block); ++i)
            want.push_back(std::string(1, sym) + std::to_string(i + 1));
        if (vars != want)
            fail("quantifier must bind the whole " + std::string(1, sym) + " block");
        Formula body = parse_formula();
        return kind == Formula::Kind::forall ? Formula::ForAll(block, std::move(body))
                                             : Formula::Exists(block, std::move(body));
    }

    Formula atom()
    {
        const std::size_t start = pos_;
        const std::size_t stop = s_.find_first_of("<>=", pos_);
        if (stop == std::string_view::npos)
            fail("atom without relation");
        Polynomial p = [&] {
            try {
                return parse_polynomial(s_.substr(start, stop - start), names_);
            } catch (const ParseError& e) {
                throw ParseError(start + e.position, e.what());
            }
        }();
        pos_ = stop;
        Relation r;
        if (eat(">="))
            r = Relation::ge;
        else if (eat("<="))
            r = Relation::le;
        else if (eat(">"))
            r = Relation::gt;
        else if (eat("<"))
            r = Relation::lt;
        else if (eat("="))
            r = Relation::eq;
        else
            fail("expected relation");
        expect("0");
        expect("]");
        return Formula::Atom(std::move(p), r);
    }

    std::string_view s_;
    Signature sig_;
    VarTable names_;
    std::size_t pos_ = 0;
};

inline std::string free_list(const std::vector<VarBlock>& free)
{
    std::string s;
    for (auto b : free)
        s += static_cast<char>(b);
    return s;
}

} // namespace detail

inline std::string export_text(const FirstOrderFormula& ff)
{
    std::ostringstream os;
    for (const auto& note : ff.notes)
        os << "# " << note << "\n";
    os << "formula " << ff.name << " n=" << ff.sig.n << " m=" << ff.sig.m
       << " free=" << detail::free_list(ff.free) << "\n";
    detail::write_text(os, ff.root, ff.sig, ff.sig.table(), 0);
    os << "\n";
    return os.str();
}

inline FirstOrderFormula parse_text(std::string_view text)
{
    FirstOrderFormula ff;
    std::size_t pos = 0;
    // comment lines, then the header line
    for (;;) {
        const std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            throw ParseError(pos, "missing formula header");
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty())
            continue;
        if (line.front() == '#') {
            line.remove_prefix(1);
            if (!line.empty() && line.front() == ' ')
                line.remove_prefix(1);
            ff.notes.emplace_back(line);
            continue;
        }
        std::istringstream hs{std::string(line)};
        std::string kw, nf, mf, ff_free;
        hs >> kw >> ff.name >> nf >> mf >> ff_free;
        if (kw != "formula" || nf.rfind("n=", 0) != 0 || mf.rfind("m=", 0) != 0 ||
            ff_free.rfind("free=", 0) != 0)
            throw ParseError(pos, "bad header line");
        try {
            ff.sig.n = std::stoul(nf.substr(2));
            ff.sig.m = std::stoul(mf.substr(2));
        } catch (const std::exception&) {
            throw ParseError(pos, "bad header sizes");
        }
        for (char c : ff_free.substr(5)) {
            if (c != 'x' && c != 'y' && c != 't')
                throw ParseError(pos, "bad free block");
            ff.free.push_back(static_cast<VarBlock>(c));
        }
        break;
    }
    if (ff.sig.n == 0)
        throw ParseError(pos, "n must be positive");
    detail::TextParser p(text.substr(pos), ff.sig);
    ff.root = p.parse_formula();
    p.finish();
    return ff;
}

// ---------------------------------------------------------------------------
// SMT-LIB 2

namespace detail {

/// Exact SMT-LIB real literal for a finite double (non-negative form plus sign handling).
inline std::string smt_real(double v)
{
    if (!std::isfinite(v))
        throw std::invalid_argument("smt export: non-finite coefficient");
    const bool neg = v < 0;
    v = std::abs(v);
    int e = 0;
    const double frac = std::frexp(v, &e);
    auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    e -= 53;
    while (mant != 0 && mant % 2 == 0 && e < 0) {
        mant /= 2;
        ++e;
    }
    using boost::multiprecision::cpp_int;
    std::string lit;
    if (e >= 0) {
        cpp_int num = cpp_int(mant) << e;
        lit = num.str() + ".0";
    } else {
        cpp_int den = cpp_int(1) << (-e);
        lit = "(/ " + std::to_string(mant) + ".0 " + den.str() + ".0)";
    }
    return neg ? "(- " + lit + ")" : lit;
}

inline std::string smt_poly(const Polynomial& p, const VarTable& names)
{
    if (p.is_zero())
        return "0.0";
    std::vector<std::string> terms;
    for (const auto& [mono, c] : p.terms()) {
        std::vector<std::string> factors;
        if (c != 1.0 || mono.is_constant())
            factors.push_back(smt_real(c));
        for (std::size_t v = 0; v < mono.nvars(); ++v)
            for (std::uint32_t e = 0; e < mono.exps[v]; ++e)
                factors.push_back(names.name(v));
        if (factors.size() == 1) {
            terms.push_back(factors.front());
        } else {
            std::string t = "(*";
            for (const auto& f : factors)
                t += " " + f;
            terms.push_back(t + ")");
        }
    }
    if (terms.size() == 1)
        return terms.front();
    std::string s = "(+";
    for (const auto& t : terms)
        s += " " + t;
    return s + ")";
}

inline std::string smt_formula(const Formula& f, const Signature& sig, const VarTable& names)
{
    using K = Formula::Kind;
    switch (f.kind) {
    case K::atom:
        return std::string("(") + to_string(f.rel) + " " + smt_poly(f.poly, names) + " 0)";
    case K::neg: return "(not " + smt_formula(f.child(), sig, names) + ")";
    case K::conj:
    case K::disj: {
        if (f.children.empty())
            return f.kind == K::conj ? "true" : "false";
        if (f.children.size() == 1)
            return smt_formula(f.child(), sig, names);
        std::string s = f.kind == K::conj ? "(and" : "(or";
        for (const auto& c : f.children)
            s += " " + smt_formula(c, sig, names);
        return s + ")";
    }
    case K::forall:
    case K::exists: {
        std::string s = f.kind == K::forall ? "(forall (" : "(exists (";
        for (std::size_t i = 0; i < sig.size(f.block); ++i)
            s += "(" + names.name(sig.offset(f.block) + i) + " Real)";
        return s + ") " + smt_formula(f.child(), sig, names) + ")";
    }
    }
    return "";
}

} // namespace detail

/// SMT-LIB 2 script (logic NRA): free variables declared, one define-fun, one assert.
inline std::string export_smt(const FirstOrderFormula& ff)
{
    const VarTable names = ff.sig.table();
    std::ostringstream os;
    for (const auto& note : ff.notes)
        os << "; " << note << "\n";
    os << "(set-logic NRA)\n";
    for (auto b : ff.free)
        for (std::size_t i = 0; i < ff.sig.size(b); ++i)
            os << "(declare-fun " << names.name(ff.sig.offset(b) + i) << " () Real)\n";
    os << "(define-fun " << ff.name << " () Bool\n  "
       << detail::smt_formula(ff.root, ff.sig, names) << ")\n";
    os << "(assert " << ff.name << ")\n(check-sat)\n";
    return os.str();
}

} // namespace pvvi
