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
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hycqm/compile.hpp"
#include "hycqm/io.hpp"
#include "hycqm/penalty_landscape.hpp"
#include "hycqm/solvers.hpp"
#include "hycqm/sqa.hpp"

namespace hycqm {

// ---------------------------------------------------------------------------
// Subproblem extraction on a plain QUBO
// ---------------------------------------------------------------------------

struct Subproblem {
    QuboModel sub;
    /// sub index -> full index, ascending
    std::vector<std::size_t> index_map;
    /// energy of the clamped part; sub.energy(y) + clamp_offset equals the
    /// full energy of the merged assignment
    double clamp_offset = 0;
};

/// Keep the k variables whose flip changes the energy the most (largest
/// |delta| under `incumbent`, ties to the lower index) and fold every other
/// variable into the linear terms and the clamp offset.
inline Subproblem extract_subproblem(const QuboModel& q, std::span<const std::uint8_t> incumbent, std::size_t k) {
    const std::size_t n = q.num_variables();
    if (incumbent.size() != n) throw ValidationError("incumbent does not match the model size");
    if (k < 1 || k > n) throw ValidationError("subproblem size must lie in [1, n]");

    QuboLandscape land(q);
    land.reset(incumbent);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> gain(n);
    for (std::size_t i = 0; i < n; ++i) gain[i] = std::abs(land.delta(i));
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });
    order.resize(k);
    std::sort(order.begin(), order.end());

    std::vector<std::int64_t> pos(n, -1);
    for (std::size_t a = 0; a < k; ++a) pos[order[a]] = static_cast<std::int64_t>(a);

    Subproblem out{QuboModel(k), order, 0.0};
    out.sub.set_offset(q.offset());
    for (std::size_t i = 0; i < n; ++i) {
        if (pos[i] >= 0) {
            out.sub.add_linear(static_cast<std::size_t>(pos[i]), q.linear(i));
        } else if (incumbent[i]) {
            out.clamp_offset += q.linear(i);
        }
    }
    for (const auto& [uv, b] : q.quadratic()) {
        const auto pu = pos[uv.first], pv = pos[uv.second];
        if (pu >= 0 && pv >= 0) {
            out.sub.add_quadratic(static_cast<std::size_t>(pu), static_cast<std::size_t>(pv), b);
        } else if (pu >= 0) {
            if (incumbent[uv.second]) out.sub.add_linear(static_cast<std::size_t>(pu), b);
        } else if (pv >= 0) {
            if (incumbent[uv.first]) out.sub.add_linear(static_cast<std::size_t>(pv), b);
        } else if (incumbent[uv.first] && incumbent[uv.second]) {
            out.clamp_offset += b;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Configuration and report
// ---------------------------------------------------------------------------

enum class Subsolver { SA, SQA, TABU };

inline std::string_view to_string(Subsolver s) {
    switch (s) {
        case Subsolver::SA: return "sa";
        case Subsolver::SQA: return "sqa";
        case Subsolver::TABU: return "tabu";
    }
    return "?";
}

inline Subsolver subsolver_from_string(std::string_view s) {
    if (s == "sa") return Subsolver::SA;
    if (s == "sqa") return Subsolver::SQA;
    if (s == "tabu") return Subsolver::TABU;
    throw ValidationError("unknown subsolver '" + std::string(s) + "' (expected sa, sqa or tabu)");
}

/// max(5, n / 5000) seconds for an n-variable model.
inline double default_time_limit(std::size_t n) { return std::max(5.0, static_cast<double>(n) / 5000.0); }

struct HybridConfig {
    /// seconds; unset means default_time_limit, values below it are raised
    std::optional<double> time_limit;
    std::size_t sampleset_size = 100;
    std::size_t subproblem_size = 180;
    Subsolver subsolver = Subsolver::SA;
    PenaltyConfig penalty;
    std::uint64_t seed = kDefaultSeed;
    /// stop after this many consecutive iterations without a strict
    /// improvement of the incumbent; zero runs to the time limit
    std::size_t max_stall_iterations = 30;

    void validate() const {
        if (time_limit && !(*time_limit >= 1)) throw ValidationError("hybrid time limit must be at least 1 s");
        if (subproblem_size < 1) throw ValidationError("subproblem size must be at least 1");
        if (sampleset_size < 1) throw ValidationError("sampleset size must be at least 1");
    }
};

struct IterationLog {
    std::uint64_t seq = 0;
    std::string phase;  // "initial", "classical" or "subsolver"
    double incumbent_energy = 0;
    bool incumbent_feasible = false;
    bool improved = false;
    std::vector<std::string> subproblem;
};

struct HybridReport {
    SampleSet sampleset;
    std::vector<IterationLog> log;
    double wall_time = 0;
    double time_limit = 0;
    std::size_t feasible_count = 0;
    std::string policy;
    std::vector<std::string> warnings;
    LambdaReport lambdas;
};

inline constexpr std::string_view kHybridPolicy =
    "alternating 50/50 loop: one classical tabu pass on the full penalized model, then one subsolver pass on an "
    "extracted subproblem; placeholder for the undisclosed time split";

inline json to_json(const IterationLog& e) {
    return json{{"seq", e.seq},
                {"phase", e.phase},
                {"incumbent_energy", e.incumbent_energy},
                {"incumbent_feasible", e.incumbent_feasible},
                {"improved", e.improved},
                {"subproblem", e.subproblem}};
}

inline json to_json(const HybridReport& r) {
    json log = json::array();
    for (const auto& e : r.log) log.push_back(to_json(e));
    return json{{"policy", r.policy},
                {"time_limit", r.time_limit},
                {"wall_time", r.wall_time},
                {"feasible_count", r.feasible_count},
                {"warnings", r.warnings},
                {"lambdas", to_json(r.lambdas)},
                {"log", std::move(log)},
                {"sampleset", to_json(r.sampleset)}};
}

/// Lowest-energy feasible sample, if any.
inline std::optional<Sample> select_best_feasible(const SampleSet& ss) {
    const Sample* best = nullptr;
    for (const auto& s : ss) {
        if (s.feasible && (!best || detail::sample_less(s, *best))) best = &s;
    }
    if (!best) return std::nullopt;
    return *best;
}

// ---------------------------------------------------------------------------
// Orchestrator
// ---------------------------------------------------------------------------

namespace detail {

/// Best-known state shared by the phases. An update is taken only if it
/// strictly lowers the energy; every attempt gets a sequence number.
class Incumbent {
 public:
    Incumbent(bit_vector x, double energy) : x_(std::move(x)), energy_(energy) {}

    std::pair<bool, std::uint64_t> try_improve(std::span<const std::uint8_t> x, double energy) {
        std::lock_guard lock(mutex_);
        const std::uint64_t seq = ++seq_;
        const double eps = 1e-12 * std::max(1.0, std::abs(energy_));
        if (!(energy < energy_ - eps)) return {false, seq};
        x_.assign(x.begin(), x.end());
        energy_ = energy;
        return {true, seq};
    }

    std::pair<bit_vector, double> snapshot() const {
        std::lock_guard lock(mutex_);
        return {x_, energy_};
    }

    std::uint64_t next_seq() {
        std::lock_guard lock(mutex_);
        return ++seq_;
    }

 private:
    mutable std::mutex mutex_;
    bit_vector x_;
    double energy_;
    std::uint64_t seq_ = 0;
};

/// Distinct states by landscape energy, lowest first, bounded in size.
class Archive {
 public:
    explicit Archive(std::size_t cap) : cap_(std::max<std::size_t>(cap, 1)) {}

    void add(std::span<const std::uint8_t> x, double energy) {
        bit_vector key(x.begin(), x.end());
        if (states_.count(key)) return;
        if (states_.size() >= cap_) {
            auto worst = std::max_element(states_.begin(), states_.end(),
                                          [](const auto& a, const auto& b) { return a.second < b.second; });
            if (worst->second <= energy) return;
            states_.erase(worst);
        }
        states_.emplace(std::move(key), energy);
    }

    std::vector<std::pair<bit_vector, double>> lowest(std::size_t count) const {
        std::vector<std::pair<bit_vector, double>> v(states_.begin(), states_.end());
        std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
        if (v.size() > count) v.resize(count);
        return v;
    }

 private:
    std::size_t cap_;
    std::map<bit_vector, double> states_;
};

/// Ising copy scaled so that the largest coefficient has magnitude 1.
inline IsingModel normalized(const IsingModel& m) {
    const double scale = m.max_abs_bias();
    if (scale == 0) return m;
    IsingModel out(m.num_variables());
    for (std::size_t i = 0; i < m.num_variables(); ++i) out.set_linear(i, m.linear(i) / scale);
    for (const auto& [uv, b] : m.quadratic()) out.add_quadratic(uv.first, uv.second, b / scale);
    out.set_offset(m.offset() / scale);
    return out;
}

/// Subsolver settings sized for subproblems of a few hundred variables.
inline SolverParams subsolver_params(Subsolver s, std::uint64_t seed, double remaining) {
    SolverParams p;
    p.seed = seed;
    p.time_limit = std::max(remaining, 1e-3);
    switch (s) {
        case Subsolver::SA:
            p.reads = 4;
            p.sweeps = 256;
            break;
        case Subsolver::SQA:
            p.reads = 2;
            p.sweeps = 128;
            p.trotter_slices = 16;
            break;
        case Subsolver::TABU:
            p.reads = 2;
            break;
    }
    return p;
}

/// Best state of a subsolver run over any landscape; tabu starts from the
/// landscape's current state, the annealers from random states.
template <FlipLandscape L>
bit_vector run_subsolver(const L& land, Subsolver s, const SolverParams& p) {
    const Deadline deadline(p.time_limit);
    std::vector<ReadResult> reads;
    switch (s) {
        case Subsolver::SA:
            reads = anneal_reads(land, p);
            break;
        case Subsolver::SQA:
            reads = sqa_reads(land, AnnealSchedule::linear(), p);
            break;
        case Subsolver::TABU:
            for (std::size_t r = 0; r < p.reads; ++r) {
                L copy = land;
                if (r > 0) {
                    Rng rng(p.seed, r);
                    detail::randomize(copy, rng);
                }
                reads.push_back(tabu_walk(copy, TabuSettings{}, deadline));
            }
            break;
    }
    const auto best = std::min_element(reads.begin(), reads.end(),
                                       [](const ReadResult& a, const ReadResult& b) { return a.energy < b.energy; });
    return best->state;
}

/// Sub-QUBO best state; SQA runs on the normalized Ising form.
inline bit_vector solve_sub_qubo(const QuboModel& q, std::span<const std::uint8_t> start, Subsolver s,
                                 const SolverParams& p) {
    if (s == Subsolver::SQA) {
        const IsingModel m = normalized(qubo_to_ising(q));
        return run_subsolver(IsingLandscape(m), s, p);
    }
    QuboLandscape land(q);
    land.reset(start);
    return run_subsolver(land, s, p);
}

}  // namespace detail

/// Decompose-sample-merge loop over the penalized binary form of `model`.
///
/// Integer variables are log-encoded; continuous variables are optimized
/// inside the energy (see PenaltyLandscape). Starting from a greedy descent
/// from all zeros, each iteration runs a tabu pass on the full landscape
/// from the (perturbed, after the first pass) incumbent, then selects the
/// `subproblem_size` binaries with the most negative flip delta, solves
/// the clamped subproblem with the configured subsolver, polishes the
/// merged state greedily and offers it to the incumbent. The loop ends at
/// the time limit or after `max_stall_iterations` iterations without
/// improvement. The sampleset holds the lowest distinct states visited,
/// padded with perturbed greedy re-descents of the incumbent.
inline HybridReport hybrid_solve(const ConstrainedModel& model, const HybridConfig& cfg = {}) {
    cfg.validate();
    Stopwatch clock;
    HybridReport report;
    report.policy = std::string(kHybridPolicy);
    if (model.num_variables() == 0) {
        report.sampleset = SampleSet(model.labels(), {}, "hybrid", clock.seconds(), cfg.seed);
        return report;
    }

    const BinarizedModel bin = binarize_integers(model);
    const ConstrainedModel& work = bin.model;
    const double floor = default_time_limit(work.num_variables());
    double limit = cfg.time_limit.value_or(floor);
    if (limit < floor) {
        report.warnings.push_back("time limit " + std::to_string(limit) + " s below the minimum; raised to " +
                                  std::to_string(floor) + " s");
        limit = floor;
    }
    report.time_limit = limit;
    const Deadline deadline(limit);

    PenaltyLandscape land(work, cfg.penalty);
    report.lambdas = land.report();
    const std::size_t n = land.size();

    auto feasible = [&](const PenaltyLandscape& l) {
        return work.is_feasible(l.model_values());
    };
    auto names_of = [&](std::span<const std::size_t> idx) {
        std::vector<std::string> out;
        out.reserve(idx.size());
        for (std::size_t i : idx) out.push_back((*work.labels())[land.model_index(i)]);
        return out;
    };

    detail::Archive archive(4 * cfg.sampleset_size);
    greedy_descend(land, deadline);
    detail::Incumbent inc(bit_vector(land.state().begin(), land.state().end()), land.energy());
    archive.add(land.state(), land.energy());
    report.log.push_back({inc.next_seq(), "initial", land.energy(), feasible(land), true, {}});

    auto offer = [&](const PenaltyLandscape& l, std::string phase, std::vector<std::string> sub) {
        archive.add(l.state(), l.energy());
        const auto [improved, seq] = inc.try_improve(l.state(), l.energy());
        const auto [x, e] = inc.snapshot();
        PenaltyLandscape view = l;
        if (!improved) view.reset(x);
        report.log.push_back({seq, std::move(phase), e, feasible(view), improved, std::move(sub)});
        return improved;
    };

    Rng rng(cfg.seed, 1);
    const std::size_t k = std::min(cfg.subproblem_size, n);
    const TabuSettings classical{0, std::clamp<std::size_t>(10 * n, 500, 5000), std::max<std::size_t>(100, n)};
    std::size_t stall = 0;
    for (std::size_t iter = 0; n > 0 && !deadline.expired(); ++iter) {
        bool improved = false;

        // classical phase
        {
            auto [x, e] = inc.snapshot();
            if (iter > 0) {
                const std::size_t flips = std::max<std::size_t>(2, n / 50);
                for (std::size_t t = 0; t < flips; ++t) x[rng.below(n)] ^= 1;
            }
            land.reset(x);
            tabu_walk(land, classical, deadline);
            improved = offer(land, "classical", {}) || improved;
        }
        if (deadline.expired()) break;

        // subsolver phase
        {
            const auto [x, e] = inc.snapshot();
            land.reset(x);
            std::vector<double> d(n);
            for (std::size_t i = 0; i < n; ++i) d[i] = land.delta(i);
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
            std::vector<std::size_t> free;
            if (stall == 0 || k == n) {
                free.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
            } else {
                // after a miss, draw k of the 2k most flippable variables
                std::vector<std::size_t> pool(order.begin(),
                                              order.begin() + static_cast<std::ptrdiff_t>(std::min(n, 2 * k)));
                for (std::size_t t = 0; t < k; ++t) {
                    std::swap(pool[t], pool[t + rng.below(pool.size() - t)]);
                    free.push_back(pool[t]);
                }
            }
            std::sort(free.begin(), free.end());

            const SolverParams p =
                detail::subsolver_params(cfg.subsolver, stream_seed(cfg.seed, 1000 + iter), deadline.remaining());
            if (land.has_continuous()) {
                const SubsetView<PenaltyLandscape> view(land, free);
                SubsetView<PenaltyLandscape> best = view;
                best.reset(detail::run_subsolver(view, cfg.subsolver, p));
                land = best.base();
            } else {
                const SubQubo sq = land.sub_qubo(free);
                bit_vector start(sq.qubo.num_variables(), 0);
                for (std::size_t a = 0; a < free.size(); ++a) start[a] = x[free[a]];
                const bit_vector y = detail::solve_sub_qubo(sq.qubo, start, cfg.subsolver, p);
                bit_vector merged = x;
                for (std::size_t a = 0; a < free.size(); ++a) merged[free[a]] = y[a];
                land.reset(merged);
            }
            greedy_descend(land, deadline);
            improved = offer(land, "subsolver", names_of(free)) || improved;
        }

        stall = improved ? 0 : stall + 1;
        if (cfg.max_stall_iterations && stall >= cfg.max_stall_iterations) break;
    }

    // sampleset: lowest distinct states, then perturbed re-descents
    const Deadline padding(limit + 0.5 - clock.seconds());
    std::vector<bit_vector> states;
    for (auto& [x, e] : archive.lowest(cfg.sampleset_size)) states.push_back(std::move(x));
    {
        const auto [x, e] = inc.snapshot();
        Rng prng(cfg.seed, 2);
        const double p_flip = n > 0 ? 2.0 / static_cast<double>(n) : 0.0;
        while (states.size() < cfg.sampleset_size && !padding.expired()) {
            bit_vector y = x;
            for (auto& b : y) {
                if (prng.bernoulli(p_flip)) b ^= 1;
            }
            land.reset(y);
            greedy_descend(land, padding);
            states.emplace_back(land.state().begin(), land.state().end());
        }
    }

    std::vector<Sample> samples;
    samples.reserve(states.size());
    for (const auto& s : states) {
        land.reset(s);
        const std::vector<double> values = bin.decode(land.model_values());
        FeasibilityResult fr = model.check_feasibility(values);
        Sample smp{Assignment(model.labels(), values), model.objective_value(values), fr.feasible, {}};
        smp.violations = std::move(fr.violations);
        samples.push_back(std::move(smp));
    }
    report.wall_time = clock.seconds();
    report.sampleset = SampleSet(model.labels(), std::move(samples), "hybrid", report.wall_time, cfg.seed);
    report.feasible_count = report.sampleset.num_feasible();
    return report;
}

}  // namespace hycqm
