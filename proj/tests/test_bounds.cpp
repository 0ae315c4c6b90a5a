#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace pvvi;

namespace {

Polynomial P(const char* s, std::size_t n = 2) { return parse_polynomial(s, n); }

} // namespace

TEST(Bounds, FirstExample)
{
    const auto r = bound_vvi(builtin::po());
    EXPECT_EQ(r.d, 3u);
    EXPECT_EQ(r.exponent, 12u);
    EXPECT_EQ(r.bound.str(), "732421875");
    EXPECT_EQ(r.bound.str(), oracle::bound_by_hand(3, 12));
    EXPECT_TRUE(r.warnings.empty());
}

TEST(Bounds, SecondExample)
{
    const auto r = bound_vop(builtin::vop());
    EXPECT_EQ(r.d, 4u);
    EXPECT_EQ(r.exponent, 12u);
    EXPECT_EQ(r.bound.str(), "55365148804");
    EXPECT_EQ(r.bound.str(), oracle::bound_by_hand(4, 12));
    EXPECT_EQ(bound_problem(Problem(builtin::vop())).bound, r.bound);
}

TEST(Bounds, GenericSystem)
{
    EXPECT_EQ(coste_bound(2, 1, 1).bound, 6);
    EXPECT_EQ(coste_bound(2, 2, 2).bound, 54);
    EXPECT_EQ(coste_bound(2, 4, 5).bound.str(), "13122");
    EXPECT_EQ(coste_bound(1, 3, 3).bound, 1);
    EXPECT_THROW(coste_bound(0, 1, 1), std::invalid_argument);
    EXPECT_THROW(component_bound(0, 3), std::invalid_argument);
}

TEST(Bounds, DegreeParameter)
{
    // affine objectives with no constraints
    VopProblem affine{2, 1, {P("x1 + 2*x2")}, {2, {}, {}, true, true}};
    const auto ra = bound_vop(affine);
    EXPECT_EQ(ra.d, 1u);
    EXPECT_EQ(ra.bound, 1);
    EXPECT_EQ(degree_param_vvi(derive_vvi(affine)), 2u);
    EXPECT_NE(std::find_if(ra.warnings.begin(), ra.warnings.end(),
                           [](const std::string& w) { return w.find("d = 2") != std::string::npos; }),
              ra.warnings.end());

    VviProblem constant{2, 1, {PolyVector({P("1"), P("-3")})}, {2, {}, {}, true, true}};
    EXPECT_EQ(degree_param_vvi(constant), 2u);

    VviProblem cubic{2, 1, {PolyVector({P("x1^3"), P("x2")})}, {2, {}, {}, true, true}};
    EXPECT_EQ(degree_param_vvi(cubic), 4u);

    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t m = 1; m <= 3; ++m) {
            VopProblem q{n, m, {}, {n, {}, {}, true, true}};
            for (std::size_t l = 0; l < m; ++l)
                q.f.push_back(Polynomial::variable(n, 0) * Polynomial::variable(n, n - 1));
            const auto r = bound_vop(q);
            EXPECT_EQ(r.d, 2u);
            EXPECT_EQ(r.exponent, 2 * m + 2 * n + 1);
        }
}

TEST(Bounds, MissingHypothesesWarn)
{
    auto p = builtin::po();
    p.K.acq_asserted = false;
    const auto r = bound_vvi(p);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_NE(r.warnings[0].find("Abadie"), std::string::npos);
}

TEST(Bounds, CheckBound)
{
    const auto r = coste_bound(2, 1, 1);
    ComponentReport c;
    c.count = 6;
    EXPECT_TRUE(check_bound(r, c).pass);
    c.count = 7;
    EXPECT_FALSE(check_bound(r, c).pass);
}

TEST(Bounds, Json)
{
    const auto j = to_json(bound_vvi(builtin::po()));
    EXPECT_EQ(j["formula"], "vvi");
    EXPECT_EQ(j["d"], 3);
    EXPECT_EQ(j["bound"], "732421875");
    EXPECT_EQ(j["inputs"]["I"], 1);
    EXPECT_EQ(j["inputs"]["J"], 0);
}

TEST(BoundsProperty, MatchesSchoolbookArithmetic)
{
    for (std::uint64_t d = 1; d <= 9; ++d)
        for (std::uint64_t e = 0; e <= 40; e += 3)
            EXPECT_EQ(component_bound(d, e).str(), oracle::bound_by_hand(d, e));
}

TEST(BoundsProperty, OptimizationFormMatchesDerivedVvi)
{
    // whenever some datum has degree >= 1 after differentiation the two degree
    // formulas agree, so the bounds agree too
    std::mt19937_64 rng(43);
    std::size_t checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto base = oracle::random_instance(rng);
        VopProblem q{base.n, base.m, {}, base.K};
        for (std::size_t l = 0; l < q.m; ++l)
            q.f.push_back(oracle::random_polynomial(rng, q.n, 4));
        const auto derived = derive_vvi(q);
        std::uint64_t top = 0;
        for (const auto& g : q.K.g)
            top = std::max(top, g.total_degree());
        for (const auto& Fl : derived.F)
            for (const auto& c : Fl)
                top = std::max(top, c.total_degree());
        if (top < 1)
            continue;
        EXPECT_EQ(bound_vop(q).bound, bound_vvi(derived).bound);
        ++checked;
    }
    EXPECT_GT(checked, 50u);
}
