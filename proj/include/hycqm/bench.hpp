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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hycqm/compile.hpp"
#include "hycqm/hybrid.hpp"
#include "hycqm/io.hpp"
#include "hycqm/parallel.hpp"
#include "hycqm/problems.hpp"
#include "hycqm/solvers.hpp"
#include "hycqm/sqa.hpp"
#include "hycqm/unit_commitment.hpp"

namespace hycqm {

// ---------------------------------------------------------------------------
// Solving a constrained model by name
// ---------------------------------------------------------------------------

inline json to_json(const HybridConfig& c) {
    return json{{"time_limit", c.time_limit ? json(*c.time_limit) : json(nullptr)},
                {"subsolver", to_string(c.subsolver)},
                {"sampleset_size", c.sampleset_size},
                {"subproblem_size", c.subproblem_size},
                {"max_stall_iterations", c.max_stall_iterations},
                {"seed", c.seed}};
}

/// Overlay hybrid settings from JSON: time_limit, subsolver, sampleset_size,
/// subproblem_size, max_stall_iterations, seed.
inline HybridConfig hybrid_config_from_json(const json& j, HybridConfig base = {}) {
    if (!j.is_object()) throw ParseError("hybrid params must be an object", 0, "$");
    for (const auto& [key, value] : j.items()) {
        if (!to_json(base).contains(key)) throw ParseError("unknown hybrid parameter '" + key + "'", 0, "$." + key);
    }
    try {
        if (j.contains("time_limit") && !j.at("time_limit").is_null()) base.time_limit = j.at("time_limit").get<double>();
        if (j.contains("subsolver")) base.subsolver = subsolver_from_string(j.at("subsolver").get<std::string>());
        base.sampleset_size = j.value("sampleset_size", base.sampleset_size);
        base.subproblem_size = j.value("subproblem_size", base.subproblem_size);
        base.max_stall_iterations = j.value("max_stall_iterations", base.max_stall_iterations);
        base.seed = j.value("seed", base.seed);
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 0, "$");
    }
    base.validate();
    return base;
}

/// Samples over the original variables of `m` from a penalized-QUBO run.
inline SampleSet decode_compiled(const ConstrainedModel& m, const BinarizedModel& bin, const CompiledQubo& cq,
                                 const SampleSet& raw) {
    std::vector<Sample> out;
    out.reserve(raw.size());
    for (const auto& s : raw) {
        bit_vector bits(s.assignment.values().size());
        for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = s.assignment.values()[i] > 0.5;
        const auto values = bin.decode(cq.model_values(bits));
        FeasibilityResult fr = m.check_feasibility(values);
        out.push_back({Assignment(m.labels(), values), m.objective_value(values), fr.feasible, std::move(fr.violations)});
    }
    return {m.labels(), std::move(out), raw.solver(), raw.wall_time(), raw.seed()};
}

/// Run `solver` on `m`: "hybrid" (params as in hybrid_config_from_json),
/// "sa", "sqa" or "tabu" on the penalized QUBO (SolverParams fields), or
/// "exact" enumeration. The seed overrides any seed in params.
inline SampleSet solve_model(const ConstrainedModel& m, const std::string& solver, const json& params,
                             std::uint64_t seed) {
    if (solver == "hybrid") {
        HybridConfig cfg = hybrid_config_from_json(params);
        cfg.seed = seed;
        return hybrid_solve(m, cfg).sampleset;
    }
    if (solver == "exact") return brute_force(m);
    if (solver != "sa" && solver != "sqa" && solver != "tabu") {
        throw ValidationError("unknown solver '" + solver + "' (expected hybrid, sa, sqa, tabu or exact)");
    }
    Stopwatch clock;
    SolverParams p = params_from_json(params);
    p.seed = seed;
    const BinarizedModel bin = binarize_integers(m);
    const CompiledQubo cq = compile_penalties(bin.model, {});
    SampleSet raw;
    if (solver == "sa") {
        raw = simulated_annealing(cq.qubo, p, cq.labels);
    } else if (solver == "tabu") {
        raw = tabu_search(cq.qubo, p, cq.labels);
    } else {
        const IsingModel ising = qubo_to_ising(cq.qubo);
        SampleSet spins = simulated_quantum_annealing(ising, p, cq.labels);
        std::vector<Sample> bits;
        for (const auto& s : spins) {
            std::vector<double> x(s.assignment.values().begin(), s.assignment.values().end());
            for (auto& v : x) v = v > 0 ? 1.0 : 0.0;
            bits.push_back({Assignment(cq.labels, x), s.energy, true, {}});
        }
        raw = SampleSet(cq.labels, std::move(bits), "sqa", spins.wall_time(), p.seed);
    }
    SampleSet out = decode_compiled(m, bin, cq, raw);
    out.set_wall_time(clock.seconds());
    return out;
}

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

/// One (family, size, solver) entry. For "uc", N is the generator count,
/// C the period count and k the startup-category count.
struct BenchCell {
    std::string family;  // blp, blp-k, blp-quad, bqp, uc
    std::size_t N = 0;
    std::size_t C = 0;
    std::size_t k = 0;
    std::string solver;
    json params = json::object();
};

struct BenchPlan {
    std::vector<BenchCell> cells;
    std::size_t repeats = 5;
    /// one seed per repeat; empty means 123, 124, ...
    std::vector<std::uint64_t> seeds;

    std::vector<std::uint64_t> resolved_seeds() const {
        if (!seeds.empty()) return seeds;
        std::vector<std::uint64_t> s(repeats);
        for (std::size_t r = 0; r < repeats; ++r) s[r] = kDefaultSeed + r;
        return s;
    }

    void validate() const {
        if (cells.empty()) throw ValidationError("bench plan has no cells");
        if (repeats < 1) throw ValidationError("bench repeats must be at least 1");
        if (!seeds.empty()) {
            if (seeds.size() != repeats) throw ValidationError("bench plan needs one seed per repeat");
            if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
                throw ValidationError("bench seeds must be distinct");
            }
        }
        static const std::set<std::string> families{"blp", "blp-k", "blp-quad", "bqp", "uc"};
        for (const auto& c : cells) {
            if (!families.count(c.family)) throw ValidationError("unknown family '" + c.family + "'");
        }
    }
};

inline BenchPlan plan_from_json(const json& j) {
    BenchPlan plan;
    try {
        plan.repeats = j.value("repeats", std::size_t(5));
        plan.seeds = j.value("seeds", std::vector<std::uint64_t>{});
        for (const auto& c : j.at("cells")) {
            BenchCell cell;
            cell.family = c.at("family").get<std::string>();
            cell.N = c.value("N", std::size_t(0));
            cell.C = c.value("C", std::size_t(0));
            cell.k = c.value("k", std::size_t(0));
            cell.solver = c.value("solver", std::string("hybrid"));
            cell.params = c.value("params", json::object());
            plan.cells.push_back(std::move(cell));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bench plan: ") + e.what(), 0, "$");
    }
    plan.validate();
    return plan;
}

inline json to_json(const BenchPlan& p) {
    json cells = json::array();
    for (const auto& c : p.cells) {
        cells.push_back(json{{"family", c.family}, {"N", c.N}, {"C", c.C}, {"k", c.k}, {"solver", c.solver}, {"params", c.params}});
    }
    return json{{"repeats", p.repeats}, {"seeds", p.resolved_seeds()}, {"cells", std::move(cells)}};
}

/// Model of a cell for one seed.
inline ConstrainedModel generate_cell(const BenchCell& c, std::uint64_t seed) {
    if (c.family == "blp" || c.family == "blp-k") return gen_blp({c.N, c.C, seed, c.family == "blp" ? 0 : c.k});
    if (c.family == "blp-quad") return gen_blp_quadratic_constraint(c.N, c.C, seed);
    if (c.family == "bqp") return gen_bqp({c.N, c.C, seed});
    if (c.family == "uc") return gen_unit_commitment(random_uc_spec(c.N, c.C, std::max<std::size_t>(c.k, 1), 1, seed));
    throw ValidationError("unknown family '" + c.family + "'");
}

inline constexpr double kMaxOracleSubsets = 2e6;

/// Exact optimum where a cheap oracle exists: blp with k = 0 (sort),
/// blp-quad (sort), bqp with at most 2e6 subsets, uc with G, T <= 4.
inline std::optional<double> cell_oracle(const BenchCell& c, std::uint64_t seed) {
    if (c.family == "blp" || (c.family == "blp-k" && c.k == 0)) return blp_oracle({c.N, c.C, seed, 0});
    if (c.family == "blp-quad") return blp_quadratic_oracle(c.N, c.C, seed);
    if (c.family == "bqp" && c.N <= kMaxSubsetBits) {
        double subsets = 1;
        for (std::size_t i = 0; i < c.C; ++i) subsets = subsets * static_cast<double>(c.N - i) / static_cast<double>(i + 1);
        if (subsets <= kMaxOracleSubsets) return bqp_oracle({c.N, c.C, seed});
    }
    if (c.family == "uc" && c.N <= 4 && c.C <= 4) {
        if (auto sol = uc_oracle(random_uc_spec(c.N, c.C, std::max<std::size_t>(c.k, 1), 1, seed))) return sol->cost;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Records and aggregation
// ---------------------------------------------------------------------------

struct BenchRecord {
    std::string family;
    std::size_t N = 0, C = 0, k = 0;
    std::string solver;
    std::uint64_t seed = 0;
    std::size_t cell = 0, repeat = 0;
    /// best feasible objective, if any feasible sample
    std::optional<double> objective;
    /// solver call only
    double wall_time_s = 0;
    /// feasibility re-check and best-feasible selection, timed apart
    double select_time_s = 0;
    std::size_t feasible_count = 0;
    std::size_t sampleset_size = 0;
    std::optional<double> oracle;
    std::string error;

    bool feasible() const { return objective.has_value(); }
};

/// Run every cell `repeats` times on up to `workers` threads. Each run uses
/// the repeat's seed for both the generator and the solver. A failing run
/// becomes a record with `error` set. Records are ordered by (cell, repeat).
inline std::vector<BenchRecord> run_plan(const BenchPlan& plan, std::size_t workers = 1) {
    plan.validate();
    const auto seeds = plan.resolved_seeds();
    std::vector<BenchRecord> records(plan.cells.size() * plan.repeats);
    parallel_for(records.size(), workers, [&](std::size_t job) {
        const std::size_t ci = job / plan.repeats, r = job % plan.repeats;
        const BenchCell& c = plan.cells[ci];
        BenchRecord& rec = records[job];
        rec.family = c.family;
        rec.N = c.N;
        rec.C = c.C;
        rec.k = c.k;
        rec.solver = c.solver;
        rec.seed = seeds[r];
        rec.cell = ci;
        rec.repeat = r;
        try {
            const ConstrainedModel m = generate_cell(c, rec.seed);
            Stopwatch solve_clock;
            const SampleSet ss = solve_model(m, c.solver, c.params, rec.seed);
            rec.wall_time_s = solve_clock.seconds();

            Stopwatch select_clock;
            const Sample* best = nullptr;
            for (const auto& s : ss) {
                if (!m.is_feasible(s.assignment.values())) continue;
                ++rec.feasible_count;
                if (!best || detail::sample_less(s, *best)) best = &s;
            }
            if (best) rec.objective = m.objective_value(best->assignment.values());
            rec.select_time_s = select_clock.seconds();
            rec.sampleset_size = ss.size();
            rec.oracle = cell_oracle(c, rec.seed);
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    });
    return records;
}

struct Aggregate {
    std::string family;
    std::size_t N = 0, C = 0, k = 0;
    std::string solver;
    std::size_t runs = 0;
    /// over records with a feasible objective
    std::optional<double> obj_mean, obj_min, obj_max;
    /// over records without an error
    std::optional<double> time_mean, time_min, time_max;
    /// mean over records with objective and oracle of (objective - oracle) /
    /// |oracle| (absolute difference when the oracle is 0)
    std::optional<double> gap_to_oracle;
};

namespace detail {

inline std::tuple<std::string, std::size_t, std::size_t, std::size_t, std::string> cell_key(const BenchRecord& r) {
    return {r.family, r.N, r.C, r.k, r.solver};
}

struct Stats {
    std::optional<double> mean, min, max;
};

inline Stats stats(const std::vector<double>& v) {
    if (v.empty()) return {};
    double s = 0;
    for (double x : v) s += x;
    return {s / static_cast<double>(v.size()), *std::min_element(v.begin(), v.end()),
            *std::max_element(v.begin(), v.end())};
}

inline double relative_gap(double value, double oracle) {
    return oracle == 0 ? value - oracle : (value - oracle) / std::abs(oracle);
}

}  // namespace detail

/// One row per (family, N, C, k, solver), in first-appearance order.
inline std::vector<Aggregate> aggregate(const std::vector<BenchRecord>& records) {
    if (records.empty()) throw ValidationError("no records to aggregate");
    std::vector<std::tuple<std::string, std::size_t, std::size_t, std::size_t, std::string>> order;
    std::map<std::tuple<std::string, std::size_t, std::size_t, std::size_t, std::string>, std::vector<const BenchRecord*>> groups;
    for (const auto& r : records) {
        auto key = detail::cell_key(r);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(&r);
    }
    std::vector<Aggregate> out;
    for (const auto& key : order) {
        const auto& rs = groups[key];
        Aggregate a;
        std::tie(a.family, a.N, a.C, a.k, a.solver) = key;
        a.runs = rs.size();
        std::vector<double> obj, time, gap;
        for (const BenchRecord* r : rs) {
            if (r->objective) obj.push_back(*r->objective);
            if (r->error.empty()) time.push_back(r->wall_time_s);
            if (r->objective && r->oracle) gap.push_back(detail::relative_gap(*r->objective, *r->oracle));
        }
        const auto o = detail::stats(obj), t = detail::stats(time), g = detail::stats(gap);
        a.obj_mean = o.mean;
        a.obj_min = o.min;
        a.obj_max = o.max;
        a.time_mean = t.mean;
        a.time_min = t.min;
        a.time_max = t.max;
        a.gap_to_oracle = g.mean;
        out.push_back(std::move(a));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline constexpr std::string_view kRecordsHeader = "family,N,C,k,solver,seed,objective,feasible,wall_time_s";
inline constexpr std::string_view kAggregateHeader =
    "family,N,C,k,solver,obj_mean,obj_min,obj_max,time_mean,time_min,time_max,gap_to_oracle";

/// Shortest decimal form that parses back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : "none"; }

inline std::string records_csv(const std::vector<BenchRecord>& records) {
    std::string out(kRecordsHeader);
    out += '\n';
    for (const auto& r : records) {
        out += r.family + ',' + std::to_string(r.N) + ',' + std::to_string(r.C) + ',' + std::to_string(r.k) + ',' +
               r.solver + ',' + std::to_string(r.seed) + ',' + format_optional(r.objective) + ',' +
               (r.feasible() ? "true" : "false") + ',' + format_number(r.wall_time_s) + '\n';
    }
    return out;
}

inline std::string aggregate_csv(const std::vector<Aggregate>& aggs) {
    std::string out(kAggregateHeader);
    out += '\n';
    for (const auto& a : aggs) {
        out += a.family + ',' + std::to_string(a.N) + ',' + std::to_string(a.C) + ',' + std::to_string(a.k) + ',' +
               a.solver + ',' + format_optional(a.obj_mean) + ',' + format_optional(a.obj_min) + ',' +
               format_optional(a.obj_max) + ',' + format_optional(a.time_mean) + ',' + format_optional(a.time_min) +
               ',' + format_optional(a.time_max) + ',' + format_optional(a.gap_to_oracle) + '\n';
    }
    return out;
}

inline json to_json(const BenchRecord& r) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return json{{"family", r.family},
                {"N", r.N},
                {"C", r.C},
                {"k", r.k},
                {"solver", r.solver},
                {"seed", r.seed},
                {"cell", r.cell},
                {"repeat", r.repeat},
                {"objective", opt(r.objective)},
                {"feasible", r.feasible()},
                {"wall_time_s", r.wall_time_s},
                {"select_time_s", r.select_time_s},
                {"feasible_count", r.feasible_count},
                {"sampleset_size", r.sampleset_size},
                {"oracle", opt(r.oracle)},
                {"error", r.error.empty() ? json(nullptr) : json(r.error)}};
}

inline json to_json(const Aggregate& a) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json("none"); };
    return json{{"family", a.family},
                {"N", a.N},
                {"C", a.C},
                {"k", a.k},
                {"solver", a.solver},
                {"runs", a.runs},
                {"obj_mean", opt(a.obj_mean)},
                {"obj_min", opt(a.obj_min)},
                {"obj_max", opt(a.obj_max)},
                {"time_mean", opt(a.time_mean)},
                {"time_min", opt(a.time_min)},
                {"time_max", opt(a.time_max)},
                {"gap_to_oracle", opt(a.gap_to_oracle)}};
}

/// Long-format series for plotting `column` (obj or time) against N.
inline std::string series_csv(const std::vector<Aggregate>& aggs, const std::string& column) {
    std::vector<const Aggregate*> rows;
    for (const auto& a : aggs) rows.push_back(&a);
    std::stable_sort(rows.begin(), rows.end(), [](const Aggregate* a, const Aggregate* b) {
        return std::tie(a->family, a->k, a->solver, a->C, a->N) < std::tie(b->family, b->k, b->solver, b->C, b->N);
    });
    std::string out = "family,C,k,solver,N," + column + "_mean," + column + "_min," + column + "_max\n";
    for (const Aggregate* a : rows) {
        const bool obj = column == "obj";
        out += a->family + ',' + std::to_string(a->C) + ',' + std::to_string(a->k) + ',' + a->solver + ',' +
               std::to_string(a->N) + ',' + format_optional(obj ? a->obj_mean : a->time_mean) + ',' +
               format_optional(obj ? a->obj_min : a->time_min) + ',' + format_optional(obj ? a->obj_max : a->time_max) +
               '\n';
    }
    return out;
}

/// Files written by emit, relative to the output directory.
inline const std::vector<std::string>& bench_files() {
    static const std::vector<std::string> names{"records.csv",        "aggregate.csv",  "results.json",
                                                "objective_vs_N.csv", "time_vs_N.csv"};
    return names;
}

/// Write records.csv, aggregate.csv, results.json and the two plot series
/// into `dir` (created if missing). Files are staged under temporary names
/// and renamed only after all of them were written.
inline void emit(const std::vector<BenchRecord>& records, const std::filesystem::path& dir) {
    const auto aggs = aggregate(records);
    json recs = json::array(), agg = json::array();
    for (const auto& r : records) recs.push_back(to_json(r));
    for (const auto& a : aggs) agg.push_back(to_json(a));
    const std::vector<std::string> contents{records_csv(records), aggregate_csv(aggs),
                                            json{{"records", std::move(recs)}, {"aggregate", std::move(agg)}}.dump(1) + "\n",
                                            series_csv(aggs, "obj"), series_csv(aggs, "time")};

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> staged;
    auto cleanup = [&] {
        for (const auto& p : staged) std::filesystem::remove(p, ec);
    };
    for (std::size_t i = 0; i < contents.size(); ++i) {
        const auto tmp = dir / (bench_files()[i] + ".tmp");
        std::ofstream out(tmp, std::ios::binary);
        if (out) staged.push_back(tmp);
        out << contents[i];
        out.close();
        if (!out) {
            cleanup();
            throw IoError("cannot write " + tmp.string());
        }
    }
    for (std::size_t i = 0; i < contents.size(); ++i) {
        std::filesystem::rename(staged[i], dir / bench_files()[i], ec);
        if (ec) {
            cleanup();
            throw IoError("cannot write " + (dir / bench_files()[i]).string() + ": " + ec.message());
        }
    }
}

// ---------------------------------------------------------------------------
// Reading records back
// ---------------------------------------------------------------------------

/// Parse a records.csv produced by records_csv. Timing-only fields other
/// than wall_time_s are not part of the CSV and stay zero.
inline std::vector<BenchRecord> parse_records_csv(std::string_view text) {
    std::vector<BenchRecord> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            if (line != kRecordsHeader) throw ParseError("unexpected records header", 1, "header");
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream cells(line);
        for (std::string cell; std::getline(cells, cell, ',');) f.push_back(cell);
        if (f.size() != 9) throw ParseError("expected 9 fields", lineno, "row");
        try {
            BenchRecord r;
            r.family = f[0];
            r.N = std::stoull(f[1]);
            r.C = std::stoull(f[2]);
            r.k = std::stoull(f[3]);
            r.solver = f[4];
            r.seed = std::stoull(f[5]);
            if (f[6] != "none") r.objective = std::stod(f[6]);
            r.wall_time_s = std::stod(f[8]);
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw ParseError("malformed number", lineno, "row");
        }
    }
    return out;
}

}  // namespace hycqm
