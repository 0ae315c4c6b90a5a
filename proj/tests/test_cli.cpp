#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pvvi;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Cli, BoundOfBuiltins)
{
    const auto r = run({"bound", "po"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["bound"], "732421875");
    EXPECT_EQ(j["d"], 3);
    EXPECT_EQ(nlohmann::json::parse(run({"bound", "vop"}).out)["bound"], "55365148804");
    EXPECT_EQ(nlohmann::json::parse(run({"bound", PVVI_DATA_DIR "/po.vvi.json"}).out)["bound"],
              "732421875");
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"formula", "po", "--target", "nosuch"}).code, 2);
    EXPECT_EQ(run({"verify", "nosuch"}).code, 2);
    EXPECT_EQ(run({"sweep", "po", "--grid", "0"}).code, 2);
    const auto missing = run({"bound", "/nonexistent/p.json"});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("/nonexistent/p.json"), std::string::npos);
}

TEST(Cli, HelpExitsCleanly)
{
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST(Cli, SchemaErrorExitsTwo)
{
    const auto path = temp_path("pvvi_cli_bad.json");
    std::ofstream(path) << R"({"kind":"vvi","n":1,"m":1,"F":[["x1 +"]]})";
    const auto r = run({"bound", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("F[0][0]"), std::string::npos);
    std::remove(path.c_str());
}

TEST(Cli, ValidationErrorExitsTwo)
{
    const auto path = temp_path("pvvi_cli_invalid.json");
    std::ofstream(path) << R"({"kind":"vvi","n":1,"m":1,"F":[["x1"]],"h":["x1^2"]})";
    EXPECT_EQ(run({"validate", path}).code, 2);
    EXPECT_EQ(run({"sweep", path, "--grid", "2"}).code, 2);
    EXPECT_EQ(run({"validate", "po"}).code, 0);
    std::remove(path.c_str());
}

TEST(Cli, SolverGuardExitsThree)
{
    const auto path = temp_path("pvvi_cli_guard.json");
    nlohmann::json j = {{"kind", "vvi"}, {"n", 1}, {"m", 1}, {"F", {{"x1"}}},
                        {"convex", true}, {"acq", true}};
    j["g"] = std::vector<std::string>(25, "x1 - 1");
    std::ofstream(path) << j.dump();
    EXPECT_EQ(run({"sweep", path, "--grid", "1"}).code, 3);
    std::remove(path.c_str());
}

TEST(Cli, SweepIsDeterministic)
{
    const auto a = run({"sweep", "po", "--grid", "20"});
    const auto b = run({"sweep", "po", "--grid", "20"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.err.find("empty fibers 1"), std::string::npos);
    const auto c = run({"sweep", "po", "--grid", "20", "--seed", "7"});
    EXPECT_EQ(c.code, 0);
}

TEST(Cli, GridOneHasTwoFibers)
{
    const auto r = run({"sweep", "vop", "--grid", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    const auto g = read_csv(in);
    EXPECT_EQ(g.entries.size(), 2u);
    EXPECT_EQ(g.empty_fibers(), 2u);
}

TEST(Cli, ComponentsFromCsvAndReport)
{
    const auto csv = temp_path("pvvi_cli_sweep.csv");
    const auto report = temp_path("pvvi_cli_report.json");
    ASSERT_EQ(run({"--report", report, "sweep", "po", "--grid", "40", "--out", csv}).code, 0);
    const auto rep = nlohmann::json::parse(slurp(report));
    EXPECT_EQ(rep["command"], "sweep");
    EXPECT_EQ(rep["problem_hash"], problem_hash(builtin::po()));
    EXPECT_TRUE(rep.contains("wall_time_s"));

    const auto r = run({"components", csv, "--eps", "1.5", "--eps-sweep", "0.5,1,1.5,2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["kind"], "weak");
    EXPECT_GT(j["points"].get<int>(), 0);
    EXPECT_EQ(j["sweep"].size(), 4u);
    EXPECT_FALSE(j.contains("bound"));
    std::remove(csv.c_str());
    std::remove(report.c_str());
}

TEST(Cli, ComponentsOfEmptyCsv)
{
    const auto csv = temp_path("pvvi_cli_empty.csv");
    std::ofstream(csv) << "xi_1,xi_2,x_1,x_2,residual,active_set\n0.5,0.5,,,,\n";
    const auto r = run({"components", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["count"], 0);
    std::remove(csv.c_str());
}

TEST(Cli, ComponentsOfProblemIncludeBound)
{
    const auto r = run({"components", "vop", "--grid", "20", "--kind", "proper", "--eps", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["kind"], "proper");
    EXPECT_EQ(j["bound"], "55365148804");
    EXPECT_EQ(j["within_bound"], true);
}

TEST(Cli, FormulaFormats)
{
    const auto text = run({"formula", "po"});
    ASSERT_EQ(text.code, 0);
    EXPECT_EQ(parse_text(text.out), formula_weak(builtin::po()));
    const auto smt = run({"formula", "vop", "--target", "proper", "--format", "smt"});
    ASSERT_EQ(smt.code, 0);
    EXPECT_NE(smt.out.find("(exists ((t1 Real)(t2 Real))"), std::string::npos);
}

TEST(Cli, VerifyGenericFile)
{
    const auto r = run({"verify", PVVI_DATA_DIR "/po.vvi.json", "--grid", "20"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
}
