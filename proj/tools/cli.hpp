// Copyright 2026 The hycqm Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.


// Command-line front end. dispatch() is kept in a header so the tests can
// drive it in-process with string streams.

#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hycqm/hycqm.hpp"

namespace hycqm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

inline void report_error(std::ostream& err, std::string_view kind, std::string_view message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

/// Write `text` to `path`, or to `out` when the path is empty or "-".
inline void emit_text(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        out << text << '\n';
    } else {
        write_text_file(path, text + "\n");
    }
}

inline json read_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), detail::line_of(text, e.byte), path);
    }
}

inline json default_params() {
    HybridConfig hybrid;
    return json{{"seed", kDefaultSeed},
                {"solver", to_json(SolverParams{})},
                {"sqa_schedule", json{{"shape", "linear A(s) = 1 - s, B(s) = s"}, {"points", 64}}},
                {"hybrid", to_json(hybrid)},
                {"hybrid_time_limit_rule", "max(5, n / 5000) seconds"},
                {"penalty", json{{"auto_lambda", true}, {"rule", "auto"}}}};
}

struct GenerateArgs {
    std::string family;
    std::size_t N = 0;
    std::size_t C = 0;
    std::size_t k = 0;
    std::uint64_t seed = kDefaultSeed;
    std::string fleet;
    std::size_t segments = 1;
    std::string out;
};

inline std::optional<UcSpec> fleet_of(const GenerateArgs& a) {
    if (a.family != "uc") return std::nullopt;
    if (!a.fleet.empty()) return uc_spec_from_json(read_json_file(a.fleet));
    if (a.N == 0 || a.C == 0) throw ValidationError("uc needs --fleet or --N (generators) and --C (periods)");
    return random_uc_spec(a.N, a.C, std::max<std::size_t>(a.k, 1), a.segments, a.seed);
}

inline ConstrainedModel generate(const GenerateArgs& a) {
    if (a.family == "blp") return gen_blp({a.N, a.C, a.seed, 0});
    if (a.family == "blp-k") return gen_blp({a.N, a.C, a.seed, a.k});
    if (a.family == "blp-quad") return gen_blp_quadratic_constraint(a.N, a.C, a.seed);
    if (a.family == "bqp") return gen_bqp({a.N, a.C, a.seed});
    return gen_unit_commitment(*fleet_of(a));
}

inline json oracle(const GenerateArgs& a) {
    json out{{"family", a.family}, {"seed", a.seed}};
    if (a.family == "blp" || a.family == "blp-k") {
        out["optimum"] = blp_oracle({a.N, a.C, a.seed, a.family == "blp" ? 0 : a.k});
    } else if (a.family == "blp-quad") {
        out["optimum"] = blp_quadratic_oracle(a.N, a.C, a.seed);
    } else if (a.family == "bqp") {
        out["optimum"] = bqp_oracle({a.N, a.C, a.seed});
    } else {
        const UcSpec spec = *fleet_of(a);
        const auto sol = uc_oracle(spec);
        if (!sol) throw InfeasibleSpecError("no commitment schedule meets demand");
        out["optimum"] = sol->cost;
        out["commitment"] = sol->commitment;
        out["power"] = sol->power;
    }
    return out;
}

inline std::vector<std::string> family_names() { return {"blp", "blp-k", "blp-quad", "bqp", "uc"}; }

inline void add_instance_options(CLI::App* cmd, GenerateArgs& a) {
    cmd->add_option("--family", a.family, "Problem family")->required()->check(CLI::IsMember(family_names()));
    cmd->add_option("--N", a.N, "Variables (uc: generators)");
    cmd->add_option("--C", a.C, "Cardinality (uc: periods)");
    cmd->add_option("--k", a.k, "Extra constraints (blp-k) or startup categories (uc)");
    cmd->add_option("--seed", a.seed, "Instance seed")->capture_default_str();
    cmd->add_option("--fleet", a.fleet, "uc fleet spec JSON file");
    cmd->add_option("--segments", a.segments, "uc cost segments for a random fleet")->capture_default_str();
}

struct CompileArgs {
    std::string model;
    std::string out;
    std::string rule = "auto";
    std::vector<std::string> lambdas;
};

inline json compile(const CompileArgs& a) {
    const ConstrainedModel m = read_model_file(a.model);
    const BinarizedModel bin = binarize_integers(m);
    PenaltyConfig cfg;
    if (a.rule == "bisection") cfg.lambdas = suggest_lambda(bin.model).lambdas;
    for (const auto& item : a.lambdas) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ValidationError("--lambda expects label=value, got '" + item + "'");
        try {
            cfg.lambdas[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw ValidationError("--lambda value is not a number: '" + item + "'");
        }
    }
    const CompiledQubo cq = compile_penalties(bin.model, cfg);
    json slacks = json::array();
    for (const auto& s : cq.slacks) {
        slacks.push_back(json{{"label", s.label}, {"range", s.range}, {"ids", s.slack_ids}, {"weights", s.weights}});
    }
    LambdaReport report = cq.report;
    if (a.rule == "bisection") {
        for (auto& [label, e] : report) {
            if (e.rule == "user" && std::none_of(a.lambdas.begin(), a.lambdas.end(), [&](const std::string& s) {
                    return s.rfind(label + "=", 0) == 0;
                })) {
                e.rule = "bisection";
            }
        }
    }
    return json{{"qubo", to_json(cq.qubo, *cq.labels)},
                {"model_variables", cq.num_model_variables},
                {"slacks", std::move(slacks)},
                {"lambdas", to_json(report)},
                {"unpenalized", cq.unpenalized}};
}

struct SolveArgs {
    std::string model;
    std::string solver = "hybrid";
    std::optional<double> time_limit;
    std::optional<std::size_t> reads;
    std::optional<std::string> subsolver;
    std::optional<std::size_t> subproblem_size;
    std::uint64_t seed = kDefaultSeed;
    std::string params;
    std::string out;
};

inline json solve(const SolveArgs& a) {
    const ConstrainedModel m = read_model_file(a.model);
    json params = a.params.empty() ? json::object() : read_json_file(a.params);
    if (!params.is_object()) throw ParseError("params must be a JSON object", 0, a.params);
    json result{{"solver", a.solver}};
    SampleSet ss;
    if (a.solver == "hybrid") {
        HybridConfig cfg = hybrid_config_from_json(params);
        if (a.time_limit) cfg.time_limit = *a.time_limit;
        if (a.reads) cfg.sampleset_size = *a.reads;
        if (a.subproblem_size) cfg.subproblem_size = *a.subproblem_size;
        if (a.subsolver) cfg.subsolver = subsolver_from_string(*a.subsolver);
        cfg.seed = a.seed;
        cfg.validate();
        HybridReport report = hybrid_solve(m, cfg);
        result["report"] = to_json(report);
        result["report"].erase("sampleset");
        ss = std::move(report.sampleset);
    } else {
        if (a.time_limit) params["time_limit"] = *a.time_limit;
        if (a.reads) params["reads"] = *a.reads;
        ss = solve_model(m, a.solver, params, a.seed);
    }
    const auto best = select_best_feasible(ss);
    result["best_feasible"] = best ? to_json(*best) : json(nullptr);
    result["sampleset"] = to_json(ss);
    if (!a.out.empty() && a.out != "-") {
        std::filesystem::path csv(a.out);
        csv.replace_extension(".csv");
        write_text_file(csv, sampleset_csv(ss));
    }
    return result;
}

struct TopoArgs {
    std::string family = "pegasus";
    std::size_t m = 16;
    double defect_rate = 0;
    std::uint64_t seed = kDefaultSeed;
    bool stats = false;
    std::size_t clique = 0;
};

inline json topo(const TopoArgs& a) {
    if (a.m < 2) throw ValidationError("pegasus needs m >= 2");
    if (!(a.defect_rate >= 0 && a.defect_rate < 1)) throw ValidationError("defect rate must lie in [0, 1)");
    const HardwareGraph g = build_pegasus(a.m, a.defect_rate, a.seed);
    json out = graph_stats(g);
    if (!a.stats) {
        json edges = json::array();
        for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
        out["edge_list"] = std::move(edges);
        out["defect_list"] = g.defects();
    }
    if (a.clique > 0) {
        const auto e = embed_clique(a.clique, g);
        out["clique"] = e ? json{{"k", a.clique},
                                 {"embedded", true},
                                 {"qubits", e->num_qubits()},
                                 {"max_chain_length", e->max_chain_length()}}
                          : json{{"k", a.clique}, {"embedded", false}};
    }
    return out;
}

struct BenchArgs {
    std::string plan;
    std::string out;
    std::size_t workers = 1;
};

/// Returns true when every cell ran without error.
inline bool bench(const BenchArgs& a, std::ostream& out) {
    const BenchPlan plan = plan_from_json(read_json_file(a.plan));
    const auto records = run_plan(plan, a.workers);
    emit(records, a.out);
    std::size_t errors = 0;
    for (const auto& r : records) errors += !r.error.empty();
    out << json{{"records", records.size()}, {"errors", errors}, {"out", a.out}}.dump() << '\n';
    return errors == 0;
}

/// Parse argv and run one subcommand. Returns the process exit code.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Constrained quadratic models: generators, penalty compilation, samplers and a hybrid solver", "hycqm"};
    app.require_subcommand(0, 1);
    bool version = false;
    bool show_params = false;
    app.add_flag("--version", version, "Print the build identifier");
    app.add_flag("--show-params", show_params, "Print default solver parameters as JSON");

    GenerateArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("generate", "Write a seeded problem instance");
    add_instance_options(gen_cmd, gen);
    gen_cmd->add_option("--out", gen.out, "Model JSON path (default stdout)");

    GenerateArgs orc;
    CLI::App* orc_cmd = app.add_subcommand("oracle", "Print the exact optimum of a small instance");
    add_instance_options(orc_cmd, orc);

    CompileArgs comp;
    CLI::App* comp_cmd = app.add_subcommand("compile", "Penalize constraints into a QUBO");
    comp_cmd->add_option("--model", comp.model, "Model JSON")->required();
    comp_cmd->add_option("--out", comp.out, "Output JSON path (default stdout)");
    comp_cmd->add_option("--lambda-rule", comp.rule, "Multiplier rule")
        ->check(CLI::IsMember({"auto", "bisection"}))
        ->capture_default_str();
    comp_cmd->add_option("--lambda", comp.lambdas, "Explicit multiplier, label=value");

    SolveArgs sol;
    CLI::App* sol_cmd = app.add_subcommand("solve", "Sample a model and report the best feasible sample");
    sol_cmd->add_option("--model", sol.model, "Model JSON")->required();
    sol_cmd->add_option("--solver", sol.solver, "Solver")
        ->check(CLI::IsMember({"hybrid", "sa", "sqa", "tabu", "exact"}))
        ->capture_default_str();
    sol_cmd->add_option("--time-limit", sol.time_limit, "Seconds");
    sol_cmd->add_option("--reads", sol.reads, "Samples to return");
    sol_cmd->add_option("--subsolver", sol.subsolver, "Hybrid subproblem solver (default sa)")
        ->check(CLI::IsMember({"sa", "sqa", "tabu"}));
    sol_cmd->add_option("--subproblem-size", sol.subproblem_size, "Binaries per hybrid subproblem");
    sol_cmd->add_option("--seed", sol.seed, "Seed")->capture_default_str();
    sol_cmd->add_option("--params", sol.params, "Solver params JSON file");
    sol_cmd->add_option("--out", sol.out, "Result JSON path; a .csv with one row per sample is written beside it");

    TopoArgs top;
    CLI::App* top_cmd = app.add_subcommand("topo", "Build a hardware graph");
    top_cmd->add_option("--family", top.family, "Graph family")->check(CLI::IsMember({"pegasus"}))->capture_default_str();
    top_cmd->add_option("--m", top.m, "Pegasus size parameter")->capture_default_str();
    top_cmd->add_option("--defect-rate", top.defect_rate, "Fraction of disabled qubits")->capture_default_str();
    top_cmd->add_option("--seed", top.seed, "Defect seed")->capture_default_str();
    top_cmd->add_flag("--stats", top.stats, "Counts only");
    top_cmd->add_option("--clique", top.clique, "Also try to embed a clique of this size");

    BenchArgs ben;
    CLI::App* ben_cmd = app.add_subcommand("bench", "Run a benchmark plan");
    ben_cmd->add_option("--plan", ben.plan, "Plan JSON")->required();
    ben_cmd->add_option("--out", ben.out, "Output directory")->required();
    ben_cmd->add_option("--workers", ben.workers, "Parallel cells")->capture_default_str()->check(CLI::PositiveNumber);

    if (argc <= 1) {
        err << app.help();
        return kExitUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report_error(err, "usage", e.what());
        return kExitUsage;
    }

    try {
        if (version) {
            out << "hycqm " << kVersion << '\n';
            return kExitOk;
        }
        if (show_params) {
            out << default_params().dump(2) << '\n';
            return kExitOk;
        }
        if (app.got_subcommand(gen_cmd)) {
            emit_text(out, gen.out, dump_model(generate(gen)));
        } else if (app.got_subcommand(orc_cmd)) {
            out << oracle(orc).dump() << '\n';
        } else if (app.got_subcommand(comp_cmd)) {
            emit_text(out, comp.out, compile(comp).dump(1));
        } else if (app.got_subcommand(sol_cmd)) {
            emit_text(out, sol.out, solve(sol).dump(1));
        } else if (app.got_subcommand(top_cmd)) {
            out << topo(top).dump() << '\n';
        } else if (app.got_subcommand(ben_cmd)) {
            return bench(ben, out) ? kExitOk : kExitDomain;
        } else {
            err << app.help();
            return kExitUsage;
        }
    } catch (const Error& e) {
        report_error(err, e.kind(), e.what());
        return kExitDomain;
    } catch (const std::exception& e) {
        report_error(err, "internal", e.what());
        return kExitDomain;
    }
    return kExitOk;
}

}  // namespace hycqm::cli
