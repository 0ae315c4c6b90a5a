#pragma once

// Subcommands of the pvvi tool. run_cli is separate from main so tests can
// drive it in-process.

#include "verify.hpp"

#include <pvvi/pvvi.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pvvi::cli {

enum ExitCode : int { ok = 0, verify_failed = 1, usage = 2, solver_guard = 3 };

struct RunReport {
    std::string problem_hash;
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> outputs;
    double wall_time = 0.0;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const
    {
        return {{"problem_hash", problem_hash}, {"command", command},  {"config", config},
                {"outputs", outputs},           {"wall_time_s", wall_time}, {"warnings", warnings}};
    }
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Builtin name ("po", "vop") or path to a problem JSON file.
inline Problem resolve_problem(const std::string& arg)
{
    if (auto b = builtin::by_name(arg))
        return *b;
    std::ifstream probe(arg);
    if (!probe)
        throw UsageError("cannot open problem file '" + arg + "'");
    return load_problem(arg);
}

inline bool is_csv(const std::string& path)
{
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

inline std::vector<double> parse_eps_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        double v = 0.0;
        if (!pvvi::detail::parse_double(tok, v) || !(v > 0))
            throw UsageError("--eps-sweep expects a comma-separated list of positive numbers");
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const auto t0 = std::chrono::steady_clock::now();
    CLI::App app{"Polynomial vector variational inequalities: bounds, sweeps, components, formulas"};
    app.require_subcommand(1);

    std::string file, out_path, report_path, target = "weak", format = "text", eps_sweep_arg;
    std::string kind_arg = "weak";
    std::size_t grid = 400;
    std::uint64_t seed = 42;
    double box = 10.0, eps = 0.5;

    auto add_solver_flags = [&](CLI::App* sub) {
        sub->add_option("--grid", grid, "simplex grid resolution N")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "start-point seed");
        sub->add_option("--box", box, "start box half-width and cloud clipping radius")
            ->check(CLI::PositiveNumber);
    };

    auto* bound = app.add_subcommand("bound", "component bound for a problem");
    bound->add_option("file", file, "problem file or builtin name")->required();

    auto* validate_cmd = app.add_subcommand("validate", "schema and hypothesis checks");
    validate_cmd->add_option("file", file, "problem file or builtin name")->required();

    auto* sweep = app.add_subcommand("sweep", "solve every fiber of the simplex grid, write CSV");
    sweep->add_option("file", file, "problem file or builtin name")->required();
    add_solver_flags(sweep);
    sweep->add_option("--out", out_path, "CSV path (default stdout)");

    auto* components = app.add_subcommand("components", "connected components of a solution cloud");
    components->add_option("file", file, "problem file, builtin name, or sweep CSV")->required();
    add_solver_flags(components);
    components->add_option("--eps", eps, "neighborhood radius")->check(CLI::PositiveNumber);
    components->add_option("--eps-sweep", eps_sweep_arg, "comma-separated eps values");
    components->add_option("--kind", kind_arg, "weak or proper")
        ->check(CLI::IsMember({"weak", "proper"}));

    auto* formula = app.add_subcommand("formula", "first-order formula for a solution set");
    formula->add_option("file", file, "problem file or builtin name")->required();
    formula->add_option("--target", target, "weak, pareto, proper or graph")
        ->check(CLI::IsMember({"weak", "pareto", "proper", "graph"}));
    formula->add_option("--format", format, "smt or text")->check(CLI::IsMember({"smt", "text"}));

    auto* verify = app.add_subcommand("verify", "golden checks (po, vop) or consistency checks (file)");
    verify->add_option("file", file, "builtin name or problem file")->required();
    add_solver_flags(verify);
    verify->add_option("--eps", eps, "neighborhood radius")->check(CLI::PositiveNumber);

    app.add_option("--report", report_path, "write the run report JSON here");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return usage;
    }

    RunReport report;
    SolverConfig cfg;
    cfg.rng_seed = seed;
    cfg.start_box = box;
    auto finish_report = [&](int code) -> int {
        report.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!report_path.empty()) {
            report.outputs.push_back(report_path);
            std::ofstream rf(report_path);
            if (!rf) {
                err << "error: cannot write report '" << report_path << "'\n";
                return usage;
            }
            rf << report.to_json().dump(2) << "\n";
        }
        return code;
    };

    try {
        const Problem* problem = nullptr;
        std::optional<Problem> holder;
        auto load = [&] {
            holder = resolve_problem(file);
            problem = &*holder;
            report.problem_hash = problem_hash(*problem);
            ValidateOptions vopt;
            vopt.convexity_probe = false;
            const auto findings = validate(*problem, vopt);
            if (has_errors(findings))
                throw ValidationError(findings);
            for (const auto& f : findings)
                report.warnings.push_back(f.path + ": " + f.message);
        };
        report.config = {{"seed", seed}, {"grid", grid}, {"box", box}, {"eps", eps}};

        if (*bound) {
            report.command = "bound";
            load();
            out << to_json(bound_problem(*problem)).dump(2) << "\n";
            return finish_report(ok);
        }

        if (*validate_cmd) {
            report.command = "validate";
            holder = resolve_problem(file);
            const auto findings = validate(*holder);
            auto arr = nlohmann::json::array();
            for (const auto& f : findings)
                arr.push_back({{"severity", f.is_error() ? "error" : "warning"},
                               {"path", f.path},
                               {"message", f.message}});
            out << nlohmann::json{{"findings", arr}}.dump(2) << "\n";
            return finish_report(has_errors(findings) ? usage : ok);
        }

        if (*sweep) {
            report.command = "sweep";
            load();
            const VviProblem p = to_vvi(*problem);
            const auto graph = run_sweep(p, SimplexGrid::make(p.m, grid), cfg);
            if (out_path.empty()) {
                write_csv(graph, out);
            } else {
                std::ofstream csv(out_path);
                if (!csv)
                    throw UsageError("cannot write '" + out_path + "'");
                write_csv(graph, csv);
                report.outputs.push_back(out_path);
            }
            const auto weak = assemble(graph, CloudKind::weak);
            err << "fibers " << graph.entries.size() << ", solutions " << graph.solution_count()
                << ", empty fibers " << graph.empty_fibers() << ", clipped outside box "
                << weak.clipped << "\n";
            if (weak.clipped > 0)
                report.warnings.push_back(std::to_string(weak.clipped) +
                                          " solutions lie outside the box and are kept in the CSV only");
            return finish_report(ok);
        }

        if (*components) {
            report.command = "components";
            MultifunctionGraph graph;
            std::optional<BoundReport> bnd;
            if (is_csv(file)) {
                std::ifstream in(file);
                if (!in)
                    throw UsageError("cannot open CSV '" + file + "'");
                cfg.start_box = box;
                graph = read_csv(in, cfg);
            } else {
                load();
                const VviProblem p = to_vvi(*problem);
                graph = run_sweep(p, SimplexGrid::make(p.m, grid), cfg);
                bnd = bound_problem(*problem);
            }
            const auto cloud =
                assemble(graph, kind_arg == "proper" ? CloudKind::proper : CloudKind::weak);
            const auto rep = count_components(cloud, eps);
            nlohmann::json j;
            if (!eps_sweep_arg.empty()) {
                const auto list = parse_eps_list(eps_sweep_arg);
                const auto sw = eps_sweep(cloud.points, list);
                j = to_json(rep, &sw);
            } else {
                j = to_json(rep);
            }
            j["kind"] = to_string(cloud.kind);
            j["points"] = cloud.size();
            j["clipped"] = cloud.clipped;
            if (bnd) {
                const auto verdict = check_bound(*bnd, rep);
                j["bound"] = bnd->bound.str();
                j["within_bound"] = verdict.pass;
            }
            out << j.dump(2) << "\n";
            return finish_report(ok);
        }

        if (*formula) {
            report.command = "formula";
            load();
            const VviProblem p = to_vvi(*problem);
            FirstOrderFormula ff;
            if (target == "weak")
                ff = formula_weak(p);
            else if (target == "pareto")
                ff = formula_pareto(p);
            else if (target == "proper")
                ff = formula_proper(p);
            else
                ff = formula_graph(p);
            out << (format == "smt" ? export_smt(ff) : export_text(ff));
            return finish_report(ok);
        }

        if (*verify) {
            report.command = "verify";
            VerifyContext ctx;
            ctx.cfg = cfg;
            ctx.grid = grid;
            ctx.eps = eps;
            std::vector<CheckRow> rows;
            if (file == "po") {
                rows = verify_po(ctx);
            } else if (file == "vop") {
                rows = verify_vop(ctx);
            } else {
                if (!is_csv(file) && file.find('.') == std::string::npos)
                    throw UsageError("unknown builtin '" + file + "' (expected po or vop)");
                load();
                rows = verify_generic(*problem, ctx);
            }
            print_table(rows, out);
            const bool all = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
            return finish_report(all ? ok : verify_failed);
        }
    } catch (const SolverGuardError& e) {
        err << "error: " << e.what() << "\n";
        return finish_report(solver_guard);
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return finish_report(usage);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return finish_report(usage);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return finish_report(usage);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return finish_report(usage);
    }
    return usage;
}

} // namespace pvvi::cli
