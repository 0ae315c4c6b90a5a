#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace pvvi;

namespace {

Polynomial P(const char* s, std::size_t n = 2) { return parse_polynomial(s, n); }

} // namespace

TEST(Poly, EvalConstraintOfFirstExample)
{
    const auto g = P("x1^2 - x2 - 4");
    EXPECT_EQ(g.eval(std::vector<double>{2, 0}), 0.0);
    EXPECT_EQ(g.eval(std::vector<double>{0, 0}), -4.0);
    EXPECT_EQ(Polynomial(3).eval(std::vector<double>{1, 2, 3}), 0.0);
}

TEST(Poly, EvalRejectsWrongLength)
{
    EXPECT_THROW(P("x1").eval(std::vector<double>{1.0}), DimensionError);
}

TEST(Poly, Partials)
{
    EXPECT_EQ(P("x1^2 - x2 - 4").partial(0), P("2*x1"));
    EXPECT_EQ(P("x1^2 - x2 - 4").partial(1), P("-1"));
    EXPECT_TRUE(P("7").partial(1).is_zero());
    EXPECT_EQ(P("0.25*x1^4 - x2").partial(0), P("x1^3"));
    EXPECT_THROW(P("x1").partial(2), DimensionError);
}

TEST(Poly, Gradients)
{
    const auto g1 = gradient(P("x1^4/4 - x2"));
    EXPECT_EQ(g1[0], P("x1^3"));
    EXPECT_EQ(g1[1], P("-1"));
    const auto g2 = gradient(P("x2^3/3 - x1"));
    EXPECT_EQ(g2[0], P("-1"));
    EXPECT_EQ(g2[1], P("x2^2"));
    const auto g0 = gradient(Polynomial(2));
    EXPECT_TRUE(g0[0].is_zero() && g0[1].is_zero());
}

TEST(Poly, TotalDegree)
{
    EXPECT_EQ(P("x1^2 - x2 - 4").total_degree(), 2u);
    EXPECT_EQ(P("-x1").total_degree(), 1u);
    EXPECT_EQ(P("7").total_degree(), 0u);
    EXPECT_EQ(Polynomial(2).total_degree(), 0u);
}

TEST(Poly, Arithmetic)
{
    EXPECT_TRUE((P("x1") + P("-x1")).is_zero());
    EXPECT_EQ(P("x1^2 - x2 - 4").scaled(2.0), P("2*x1^2 - 2*x2 - 8"));
    EXPECT_EQ(P("x1") * P("x1"), P("x1^2"));
    EXPECT_EQ(P("x1 + x2").pow(2), P("x1^2 + 2*x1*x2 + x2^2"));
    EXPECT_EQ(P("x1 + 1").pow(0), P("1"));
    EXPECT_THROW(P("x1") + Polynomial(3), DimensionError);
}

TEST(Poly, ParseAndFormat)
{
    const auto g = P("x1^2 - x2 - 4");
    Monomial sq(2);
    sq.exps = {2, 0};
    EXPECT_EQ(g.coeff(sq), 1.0);
    EXPECT_EQ(g.terms().size(), 3u);
    EXPECT_TRUE(P("0").is_zero());
    EXPECT_EQ(format_polynomial(P("x2 + x1")), "x1 + x2");
    EXPECT_EQ(format_polynomial(P("x1^4/4 - x2")), "0.25*x1^4 - x2");
    EXPECT_EQ(format_polynomial(Polynomial(2)), "0");
    EXPECT_EQ(format_polynomial(P("-(x1 - 2)*(x1 + 2)")), "-x1^2 + 4");
    EXPECT_EQ(P("2^3*x1"), P("8*x1"));
    EXPECT_EQ(P("1.5e2*x2"), P("150*x2"));
}

TEST(Poly, GrlexOrder)
{
    // higher total degree first, then lexicographic
    EXPECT_EQ(format_polynomial(P("1 + x2 + x1 + x2^2 + x1*x2 + x1^2")),
              "x1^2 + x1*x2 + x2^2 + x1 + x2 + 1");
}

TEST(Poly, ParseErrorsCarryPosition)
{
    auto pos_of = [](const char* s) -> std::size_t {
        try {
            parse_polynomial(s, 2);
        } catch (const ParseError& e) {
            return e.position;
        }
        return std::string::npos;
    };
    EXPECT_EQ(pos_of("x1 + x3"), 5u);
    EXPECT_EQ(pos_of("2 x1"), 2u);
    EXPECT_NE(pos_of("x1 / x2"), std::string::npos);
    EXPECT_NE(pos_of("x1^-1"), std::string::npos);
    EXPECT_NE(pos_of("(x1 + 1"), std::string::npos);
    EXPECT_NE(pos_of(""), std::string::npos);
    EXPECT_NE(pos_of("x1 / 0"), std::string::npos);
}

TEST(Poly, CustomVariableNames)
{
    const VarTable vars({"a", "b"});
    const auto p = parse_polynomial("a*b - b^2", vars);
    EXPECT_EQ(format_polynomial(p, vars), "a*b - b^2");
    EXPECT_EQ(p, P("x1*x2 - x2^2"));
}

TEST(Poly, RemapAndShift)
{
    const auto p = P("x1^2*x2 + 3");
    const auto s = p.shifted(5, 2);
    EXPECT_EQ(s, parse_polynomial("x3^2*x4 + 3", 5));
    EXPECT_TRUE(s.uses_only([](std::size_t v) { return v == 2 || v == 3; }));
}

TEST(PolyProperty, PartialsMatchCentralDifferences)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> nv(1, 4);
    std::uniform_int_distribution<unsigned> dg(0, 5);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = nv(rng);
        const auto p = oracle::random_polynomial(rng, n, dg(rng));
        std::vector<double> x(n);
        for (auto& v : x)
            v = coord(rng);
        for (std::size_t k = 0; k < n; ++k) {
            const double sym = p.partial(k).eval(x);
            const double fd = oracle::central_difference(p, x, k);
            const double scale = std::max({1.0, std::abs(sym), std::abs(fd)});
            EXPECT_LE(std::abs(sym - fd) / scale, 1e-6) << format_polynomial(p) << " d/dx" << k + 1;
        }
    }
}

TEST(PolyProperty, EvaluationIsARingHomomorphism)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
        const auto p = oracle::random_polynomial(rng, n, 4);
        const auto q = oracle::random_polynomial(rng, n, 4);
        std::vector<double> x(n);
        for (auto& v : x)
            v = coord(rng);
        const double px = p.eval(x), qx = q.eval(x);
        const double sum = (p + q).eval(x), prod = (p * q).eval(x);
        // scale by the size of the individual terms to absorb cancellation
        double pabs = 0.0, qabs = 0.0;
        for (const auto& [m, c] : p.terms()) {
            double t = std::abs(c);
            for (std::size_t k = 0; k < n; ++k)
                t *= std::pow(std::abs(x[k]), m.exps[k]);
            pabs += t;
        }
        for (const auto& [m, c] : q.terms()) {
            double t = std::abs(c);
            for (std::size_t k = 0; k < n; ++k)
                t *= std::pow(std::abs(x[k]), m.exps[k]);
            qabs += t;
        }
        EXPECT_NEAR(sum, px + qx, 1e-12 * std::max(1.0, pabs + qabs));
        EXPECT_NEAR(prod, px * qx, 1e-12 * std::max(1.0, pabs * qabs));
    }
}

TEST(PolyProperty, DegreeOfProductIsAdditive)
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
        // the product of the grlex-leading monomials has a single contribution
        auto p = oracle::random_polynomial(rng, n, 4), q = oracle::random_polynomial(rng, n, 4);
        if (p.is_zero() || q.is_zero())
            continue;
        EXPECT_EQ((p * q).total_degree(), p.total_degree() + q.total_degree());
    }
}

TEST(PolyProperty, FormatIsIdempotent)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
        const auto p = oracle::random_polynomial(rng, n, 5);
        const std::string once = format_polynomial(p);
        const auto back = parse_polynomial(once, n);
        EXPECT_EQ(back, p) << once;
        EXPECT_EQ(format_polynomial(back), once);
    }
}
