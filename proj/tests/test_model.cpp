#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

using namespace pvvi;

namespace {

Polynomial P(const char* s, std::size_t n = 2) { return parse_polynomial(s, n); }

bool has_finding(const std::vector<Finding>& fs, Finding::Severity sev, const std::string& needle)
{
    return std::any_of(fs.begin(), fs.end(), [&](const Finding& f) {
        return f.severity == sev && f.message.find(needle) != std::string::npos;
    });
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST(Model, DeriveVviFromSecondExample)
{
    const auto p = derive_vvi(builtin::vop());
    ASSERT_EQ(p.F.size(), 2u);
    EXPECT_EQ(p.F[0][0], P("x1^3"));
    EXPECT_EQ(p.F[0][1], P("-1"));
    EXPECT_EQ(p.F[1][0], P("-1"));
    EXPECT_EQ(p.F[1][1], P("x2^2"));
    EXPECT_EQ(p.K, builtin::vop().K);
}

TEST(Model, DeriveVviSmallCases)
{
    VopProblem lin{1, 1, {parse_polynomial("x1", 1)}, {1, {}, {}, true, true}};
    EXPECT_EQ(derive_vvi(lin).F[0][0], parse_polynomial("1", 1));
    VopProblem constant{2, 2, {P("3"), P("-1")}, {2, {}, {}, true, true}};
    for (const auto& Fl : derive_vvi(constant).F)
        for (const auto& c : Fl)
            EXPECT_TRUE(c.is_zero());
}

TEST(Model, ValidateFirstExample)
{
    const auto fs = validate(builtin::po());
    EXPECT_TRUE(fs.empty()) << ValidationError(fs).what();
}

TEST(Model, NonAffineEqualityIsAnError)
{
    auto p = builtin::po();
    p.K.h.push_back(P("x1^2"));
    const auto fs = validate(p);
    EXPECT_TRUE(has_errors(fs));
    EXPECT_TRUE(has_finding(fs, Finding::Severity::error, "h_j must be affine"));
}

TEST(Model, ConcaveConstraintTriggersProbeWarning)
{
    auto p = builtin::po();
    p.K.g = {P("-x1^2")};
    const auto fs = validate(p);
    EXPECT_FALSE(has_errors(fs));
    EXPECT_TRUE(has_finding(fs, Finding::Severity::warning, "convexity probe"));
}

TEST(Model, MissingAssertionsWarnOnly)
{
    auto p = builtin::po();
    p.K.convexity_asserted = false;
    p.K.acq_asserted = false;
    const auto fs = validate(p);
    EXPECT_FALSE(has_errors(fs));
    EXPECT_EQ(fs.size(), 2u);
}

TEST(Model, DimensionMismatchesAreErrors)
{
    auto p = builtin::po();
    p.F[1] = PolyVector({P("x1")});
    EXPECT_TRUE(has_errors(validate(p)));
    auto q = builtin::po();
    q.K.g = {parse_polynomial("x1", 3)};
    EXPECT_TRUE(has_errors(validate(q)));
}

TEST(Model, BuiltinFilesMatchBuiltins)
{
    EXPECT_EQ(std::get<VviProblem>(load_problem(PVVI_DATA_DIR "/po.vvi.json")), builtin::po());
    EXPECT_EQ(std::get<VopProblem>(load_problem(PVVI_DATA_DIR "/vop.vop.json")), builtin::vop());
}

TEST(Model, EmptyConstraintListsMeanWholeSpace)
{
    const auto p = problem_from_json(nlohmann::json::parse(
        R"({"kind":"vvi","n":1,"m":1,"F":[["x1"]]})"));
    const auto& v = std::get<VviProblem>(p);
    EXPECT_TRUE(v.K.g.empty());
    EXPECT_TRUE(v.K.h.empty());
    EXPECT_FALSE(has_errors(validate(v)));
}

TEST(Model, SchemaErrorsNameTheField)
{
    auto field_of = [](const char* text) -> std::string {
        try {
            problem_from_json(nlohmann::json::parse(text));
        } catch (const SchemaError& e) {
            return e.path;
        }
        return "";
    };
    EXPECT_EQ(field_of(R"({"n":1,"m":1})"), "kind");
    EXPECT_EQ(field_of(R"({"kind":"zzz","n":1,"m":1})"), "kind");
    EXPECT_EQ(field_of(R"({"kind":"vvi","n":0,"m":1,"F":[]})"), "n");
    EXPECT_EQ(field_of(R"({"kind":"vvi","n":1,"m":2,"F":[["x1"]]})"), "F");
    EXPECT_EQ(field_of(R"({"kind":"vvi","n":1,"m":1,"F":[["x1 +"]]})"), "F[0][0]");
    EXPECT_EQ(field_of(R"({"kind":"vop","n":1,"m":1,"f":["x1"],"g":[3]})"), "g[0]");
    EXPECT_EQ(field_of(R"({"kind":"vop","n":1,"m":1,"f":["x1"],"convex":"yes"})"), "convex");
}

TEST(Model, MissingFileNamesPath)
{
    try {
        load_problem("/nonexistent/problem.json");
        FAIL();
    } catch (const std::exception& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/problem.json"), std::string::npos);
    }
}

TEST(ModelProperty, SaveLoadRoundTrip)
{
    std::mt19937_64 rng(3);
    const std::string path = temp_path("pvvi_model_roundtrip.json");
    for (int trial = 0; trial < 30; ++trial) {
        const Problem p = oracle::random_instance(rng);
        save_problem(p, path);
        EXPECT_EQ(load_problem(path), p);
    }
    for (const Problem& p : {Problem(builtin::po()), Problem(builtin::vop())}) {
        save_problem(p, path);
        EXPECT_EQ(load_problem(path), p);
        EXPECT_EQ(problem_hash(load_problem(path)), problem_hash(p));
    }
    std::remove(path.c_str());
}

TEST(ModelProperty, DerivationCommutesWithConstraintValidation)
{
    auto vop = builtin::vop();
    const std::vector<ConstraintSet> sets = {
        vop.K,
        {2, {P("-x1^2")}, {P("x1 + x2 - 1")}, true, false},
        {2, {}, {P("x1*x2")}, false, true},
    };
    for (const auto& K : sets) {
        vop.K = K;
        const auto direct = validate(vop);
        const auto derived = validate(derive_vvi(vop));
        ASSERT_EQ(direct.size(), derived.size());
        for (std::size_t i = 0; i < direct.size(); ++i) {
            EXPECT_EQ(direct[i].path, derived[i].path);
            EXPECT_EQ(direct[i].message, derived[i].message);
        }
    }
}

TEST(Model, HashIsStableAndDiscriminating)
{
    EXPECT_EQ(problem_hash(builtin::po()), problem_hash(builtin::po()));
    EXPECT_NE(problem_hash(builtin::po()), problem_hash(builtin::vop()));
    EXPECT_EQ(problem_hash(builtin::po()).size(), 16u);
}
