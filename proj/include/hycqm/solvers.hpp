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
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hycqm/exhaustive.hpp"
#include "hycqm/io.hpp"
#include "hycqm/landscape.hpp"
#include "hycqm/mixed.hpp"
#include "hycqm/model.hpp"
#include "hycqm/parallel.hpp"
#include "hycqm/random.hpp"

namespace hycqm {

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct SolverParams {
    std::size_t reads = 100;
    std::size_t sweeps = 1000;
    std::uint64_t seed = kDefaultSeed;
    /// annealing temperatures; unset means derived from the model
    std::optional<double> t_hot;
    std::optional<double> t_cold;
    /// SQA only
    std::size_t trotter_slices = 20;
    double sqa_temperature = 0.05;
    /// tabu only; zero means derived from n
    std::size_t tabu_tenure = 0;
    std::size_t tabu_iterations = 0;
    std::size_t tabu_stall = 0;
    /// seconds; zero means no limit
    double time_limit = 0;
    std::size_t threads = 1;
    /// sweeps between checks of the incremental energy against a full
    /// recomputation; zero disables
    std::size_t check_energy_every = 64;

    void validate() const {
        if (reads < 1 || sweeps < 1) throw ValidationError("reads and sweeps must be at least 1");
        if (trotter_slices < 2) throw ValidationError("SQA needs at least 2 Trotter slices");
        if (!(sqa_temperature > 0)) throw ValidationError("SQA temperature must be positive");
        if (t_hot && !(*t_hot > 0)) throw ValidationError("t_hot must be positive");
        if (t_cold && !(*t_cold > 0)) throw ValidationError("t_cold must be positive");
        if (t_hot && t_cold && !(*t_hot > *t_cold)) throw ValidationError("t_hot must exceed t_cold");
        if (time_limit < 0) throw ValidationError("time limit must be non-negative");
    }
};

inline json to_json(const SolverParams& p) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return json{{"reads", p.reads},
                {"sweeps", p.sweeps},
                {"seed", p.seed},
                {"t_hot", opt(p.t_hot)},
                {"t_cold", opt(p.t_cold)},
                {"trotter_slices", p.trotter_slices},
                {"sqa_temperature", p.sqa_temperature},
                {"tabu_tenure", p.tabu_tenure},
                {"tabu_iterations", p.tabu_iterations},
                {"tabu_stall", p.tabu_stall},
                {"time_limit", p.time_limit},
                {"threads", p.threads},
                {"check_energy_every", p.check_energy_every}};
}

/// Overlay the fields present in `j` onto `base`.
inline SolverParams params_from_json(const json& j, SolverParams base = {}) {
    if (!j.is_object()) throw ParseError("solver params must be an object", 0, "$");
    const json known = to_json(SolverParams{});
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ParseError("unknown solver parameter '" + key + "'", 0, "$." + key);
    }
    auto get = [&](const char* key, auto& field) {
        auto it = j.find(key);
        if (it == j.end()) return;
        try {
            it->get_to(field);
        } catch (const json::exception& e) {
            throw ParseError(e.what(), 0, std::string("$.") + key);
        }
    };
    auto get_opt = [&](const char* key, std::optional<double>& field) {
        auto it = j.find(key);
        if (it == j.end()) return;
        if (it->is_null()) {
            field.reset();
        } else if (it->is_number()) {
            field = it->get<double>();
        } else {
            throw ParseError("expected a number or null", 0, std::string("$.") + key);
        }
    };
    get("reads", base.reads);
    get("sweeps", base.sweeps);
    get("seed", base.seed);
    get_opt("t_hot", base.t_hot);
    get_opt("t_cold", base.t_cold);
    get("trotter_slices", base.trotter_slices);
    get("sqa_temperature", base.sqa_temperature);
    get("tabu_tenure", base.tabu_tenure);
    get("tabu_iterations", base.tabu_iterations);
    get("tabu_stall", base.tabu_stall);
    get("time_limit", base.time_limit);
    get("threads", base.threads);
    get("check_energy_every", base.check_energy_every);
    base.validate();
    return base;
}

/// Best state of one read.
struct ReadResult {
    bit_vector state;
    double energy = std::numeric_limits<double>::infinity();
};

namespace detail {

inline Sample spin_sample(const IsingModel& m, const LabelsPtr& labels, std::span<const std::uint8_t> bits) {
    std::vector<double> s = to_spins(bits);
    const double e = m.energy(s);
    return {Assignment(labels, std::move(s)), e, true, {}};
}

inline Sample bit_sample(const QuboModel& q, const LabelsPtr& labels, std::span<const std::uint8_t> bits) {
    std::vector<double> x = to_values(bits);
    const double e = q.energy(x);
    return {Assignment(labels, std::move(x)), e, true, {}};
}

inline LabelsPtr labels_or_default(LabelsPtr labels, std::size_t n) {
    if (!labels) return index_labels(n);
    if (labels->size() != n) throw ValidationError("labels do not match the model size");
    return labels;
}

template <FlipLandscape L>
void randomize(L& land, Rng& rng) {
    bit_vector x(land.size());
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() >> 63);
    land.reset(x);
}

template <FlipLandscape L>
void resync(L& land) {
    const double e = land.energy();
    const double exact = land.recompute_energy();
    if (std::abs(e - exact) > 1e-9 * std::max(1.0, std::abs(exact))) {
        bit_vector x(land.state().begin(), land.state().end());
        land.reset(x);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Greedy descent
// ---------------------------------------------------------------------------

/// Steepest single-flip descent to a 1-flip-stable state. Ties go to the
/// lowest index. Returns the number of flips made.
template <FlipLandscape L>
std::size_t greedy_descend(L& land, const Deadline& deadline = {}) {
    std::size_t flips = 0;
    const std::size_t n = land.size();
    while (true) {
        std::size_t best = n;
        double best_delta = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = land.delta(i);
            if (d < best_delta) {
                best_delta = d;
                best = i;
            }
        }
        if (best == n || best_delta > -1e-12 * std::max(1.0, std::abs(land.energy()))) break;
        land.flip(best);
        ++flips;
        if ((flips & 255) == 0 && deadline.expired()) break;
    }
    return flips;
}

inline Sample greedy_descent(const QuboModel& q, std::span<const std::uint8_t> start, LabelsPtr labels = nullptr) {
    if (start.size() != q.num_variables()) throw ValidationError("start state does not match the model size");
    QuboLandscape land(q);
    land.reset(start);
    greedy_descend(land);
    return detail::bit_sample(q, detail::labels_or_default(std::move(labels), q.num_variables()), land.state());
}

// ---------------------------------------------------------------------------
// Simulated annealing
// ---------------------------------------------------------------------------

/// T_hot such that an average uphill move is accepted with probability 0.8,
/// estimated from 100 deltas along a random walk.
template <FlipLandscape L>
double estimate_hot_temperature(L& land, Rng& rng) {
    const std::size_t n = land.size();
    if (n == 0) return 1.0;
    detail::randomize(land, rng);
    double uphill = 0, any = 0;
    std::size_t n_up = 0, n_any = 0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t i = rng.below(n);
        const double d = land.delta(i);
        if (d > 0) {
            uphill += d;
            ++n_up;
        }
        if (d != 0) {
            any += std::abs(d);
            ++n_any;
        }
        land.flip(i);
    }
    const double mean = n_up ? uphill / n_up : (n_any ? any / n_any : 0.0);
    return mean > 0 ? -mean / std::log(0.8) : 1.0;
}

/// Geometric schedule of `sweeps` temperatures from t_hot down to t_cold.
inline std::vector<double> geometric_temperatures(double t_hot, double t_cold, std::size_t sweeps) {
    std::vector<double> t(sweeps, t_hot);
    if (sweeps > 1) {
        const double r = std::pow(t_cold / t_hot, 1.0 / static_cast<double>(sweeps - 1));
        for (std::size_t k = 1; k < sweeps; ++k) t[k] = t[k - 1] * r;
        t.back() = t_cold;
    }
    return t;
}

/// One Metropolis annealing read from a random state. Sweeps visit the
/// variables in index order; the best state seen at a sweep boundary is
/// kept and its energy recomputed exactly.
template <FlipLandscape L>
ReadResult anneal_read(L& land, std::span<const double> temperatures, Rng& rng, const Deadline& deadline = {},
                       std::size_t check_every = 64) {
    const std::size_t n = land.size();
    detail::randomize(land, rng);
    ReadResult best{bit_vector(land.state().begin(), land.state().end()), land.energy()};
    for (std::size_t sweep = 0; sweep < temperatures.size(); ++sweep) {
        const double beta = 1.0 / temperatures[sweep];
        for (std::size_t i = 0; i < n; ++i) {
            const double d = land.delta(i);
            if (d <= 0 || rng.uniform() < std::exp(-d * beta)) land.flip(i);
        }
        if (check_every && (sweep + 1) % check_every == 0) detail::resync(land);
        if (land.energy() < best.energy) {
            best.energy = land.energy();
            best.state.assign(land.state().begin(), land.state().end());
        }
        if ((sweep & 15) == 15 && deadline.expired()) break;
    }
    land.reset(best.state);
    best.energy = land.recompute_energy();
    return best;
}

/// Resolved annealing temperatures for a landscape.
template <FlipLandscape L>
std::vector<double> sa_temperatures(L land, const SolverParams& p) {
    double hot = 0;
    if (p.t_hot) {
        hot = *p.t_hot;
    } else {
        Rng rng(p.seed, ~std::uint64_t(0));
        hot = estimate_hot_temperature(land, rng);
        if (p.t_cold && hot <= *p.t_cold) hot = 10 * *p.t_cold;
    }
    const double cold = p.t_cold ? *p.t_cold : 1e-3 * hot;
    return geometric_temperatures(hot, cold, p.sweeps);
}

/// Independent annealing reads over any landscape; read r uses stream
/// (seed, r), so results do not depend on p.threads.
template <FlipLandscape L>
std::vector<ReadResult> anneal_reads(const L& prototype, const SolverParams& p) {
    p.validate();
    const std::vector<double> temps = sa_temperatures(prototype, p);
    const Deadline deadline(p.time_limit);
    std::vector<ReadResult> out(p.reads);
    parallel_for(p.reads, p.threads, [&](std::size_t r) {
        L land = prototype;
        Rng rng(p.seed, r);
        out[r] = anneal_read(land, temps, rng, deadline, p.check_energy_every);
    });
    return out;
}

inline SampleSet simulated_annealing(const IsingModel& m, const SolverParams& p = {}, LabelsPtr labels = nullptr) {
    Stopwatch clock;
    labels = detail::labels_or_default(std::move(labels), m.num_variables());
    std::vector<Sample> samples;
    for (const auto& r : anneal_reads(IsingLandscape(m), p)) samples.push_back(detail::spin_sample(m, labels, r.state));
    return {labels, std::move(samples), "sa", clock.seconds(), p.seed};
}

inline SampleSet simulated_annealing(const QuboModel& q, const SolverParams& p = {}, LabelsPtr labels = nullptr) {
    Stopwatch clock;
    labels = detail::labels_or_default(std::move(labels), q.num_variables());
    std::vector<Sample> samples;
    for (const auto& r : anneal_reads(QuboLandscape(q), p)) samples.push_back(detail::bit_sample(q, labels, r.state));
    return {labels, std::move(samples), "sa", clock.seconds(), p.seed};
}

// ---------------------------------------------------------------------------
// Tabu search
// ---------------------------------------------------------------------------

struct TabuSettings {
    std::size_t tenure = 0;
    std::size_t max_iterations = 0;
    std::size_t stall_limit = 0;

    /// Fill zero fields with the defaults for an n-variable problem.
    TabuSettings resolved(std::size_t n) const {
        TabuSettings s = *this;
        if (s.tenure == 0) s.tenure = std::max<std::size_t>(1, std::min<std::size_t>(20, n / 4));
        if (s.max_iterations == 0) s.max_iterations = std::max<std::size_t>(2000, 50 * n);
        if (s.stall_limit == 0) s.stall_limit = std::max<std::size_t>(200, 10 * n);
        return s;
    }
};

/// Single-flip tabu search from the landscape's current state. Each step
/// takes the best non-tabu move (ties: lowest index); a tabu move is
/// allowed when it improves on the best energy found (aspiration). Leaves
/// the landscape at the best state found.
template <FlipLandscape L>
ReadResult tabu_walk(L& land, TabuSettings s, const Deadline& deadline = {}) {
    const std::size_t n = land.size();
    s = s.resolved(n);
    ReadResult best{bit_vector(land.state().begin(), land.state().end()), land.energy()};
    std::vector<std::size_t> tabu_until(n, 0);
    std::size_t since_best = 0;
    for (std::size_t it = 1; it <= s.max_iterations && since_best < s.stall_limit; ++it) {
        const double e = land.energy();
        const double eps = 1e-12 * std::max(1.0, std::abs(best.energy));
        std::size_t move = n;
        double move_delta = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double d = land.delta(i);
            const bool allowed = tabu_until[i] < it || e + d < best.energy - eps;
            if (allowed && d < move_delta) {
                move_delta = d;
                move = i;
            }
        }
        if (move == n) break;
        land.flip(move);
        tabu_until[move] = it + s.tenure;
        if (land.energy() < best.energy - eps) {
            best.energy = land.energy();
            best.state.assign(land.state().begin(), land.state().end());
            since_best = 0;
        } else {
            ++since_best;
        }
        if ((it & 63) == 0 && deadline.expired()) break;
    }
    land.reset(best.state);
    best.energy = land.recompute_energy();
    return best;
}

inline SampleSet tabu_search(const QuboModel& q, const SolverParams& p = {}, LabelsPtr labels = nullptr) {
    p.validate();
    Stopwatch clock;
    labels = detail::labels_or_default(std::move(labels), q.num_variables());
    const TabuSettings settings{p.tabu_tenure, p.tabu_iterations, p.tabu_stall};
    const Deadline deadline(p.time_limit);
    const QuboLandscape prototype(q);
    std::vector<ReadResult> reads(p.reads);
    parallel_for(p.reads, p.threads, [&](std::size_t r) {
        QuboLandscape land = prototype;
        Rng rng(p.seed, r);
        detail::randomize(land, rng);
        reads[r] = tabu_walk(land, settings, deadline);
    });
    std::vector<Sample> samples;
    for (const auto& r : reads) samples.push_back(detail::bit_sample(q, labels, r.state));
    return {labels, std::move(samples), "tabu", clock.seconds(), p.seed};
}

// ---------------------------------------------------------------------------
// Exact enumeration
// ---------------------------------------------------------------------------

/// Every global minimizer of a QUBO with at most 24 variables.
inline SampleSet brute_force(const QuboModel& q, LabelsPtr labels = nullptr) {
    Stopwatch clock;
    labels = detail::labels_or_default(std::move(labels), q.num_variables());
    QuboLandscape land(q);
    auto res = enumerate_minima(land);
    std::vector<Sample> samples;
    for (const auto& bits : res.argmin) samples.push_back(detail::bit_sample(q, labels, bits));
    return {labels, std::move(samples), "exact", clock.seconds(), 0};
}

inline SampleSet brute_force(const IsingModel& m, LabelsPtr labels = nullptr) {
    Stopwatch clock;
    labels = detail::labels_or_default(std::move(labels), m.num_variables());
    IsingLandscape land(m);
    auto res = enumerate_minima(land);
    std::vector<Sample> samples;
    for (const auto& bits : res.argmin) samples.push_back(detail::spin_sample(m, labels, bits));
    return {labels, std::move(samples), "exact", clock.seconds(), 0};
}

namespace detail {

/// Collects the feasible minimizers of a constrained enumeration.
class FeasibleArgmin {
 public:
    explicit FeasibleArgmin(const ConstrainedModel& m) : model_(m) {}

    void offer(const std::vector<double>& x) {
        if (!model_.is_feasible(x)) return;
        const double e = model_.objective_value(x);
        const double tol = std::isfinite(best_) ? 1e-9 * std::max(1.0, std::abs(best_)) : 0.0;
        if (e < best_ - tol) {
            best_ = e;
            argmin_.clear();
        }
        if (e <= best_ + tol) argmin_.push_back(x);
    }

    SampleSet finish(double seconds) {
        std::vector<Sample> samples;
        for (auto& x : argmin_) {
            const double e = model_.objective_value(x);
            if (e > best_ + 1e-9 * std::max(1.0, std::abs(best_))) continue;
            samples.push_back({Assignment(model_.labels(), std::move(x)), e, true, {}});
        }
        return {model_.labels(), std::move(samples), "exact", seconds, 0};
    }

 private:
    const ConstrainedModel& model_;
    double best_ = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> argmin_;
};

}  // namespace detail

/// Feasible global minimizers of a ConstrainedModel by enumerating every
/// discrete assignment (at most 2^24 of them). Continuous variables are
/// optimized exactly per discrete assignment when the objective is linear
/// in them. An empty result means the model is infeasible.
inline SampleSet brute_force(const ConstrainedModel& m) {
    Stopwatch clock;
    const ContinuousPart cont(m);
    if (!cont.empty() && !cont.objective_linear()) {
        throw UnsupportedEncodingError("exact enumeration needs an objective linear in the continuous variables");
    }
    std::vector<std::size_t> discrete;
    double states = 1;
    for (std::size_t i = 0; i < m.num_variables(); ++i) {
        const auto& v = m.variable(i);
        if (!v.is_discrete()) continue;
        discrete.push_back(i);
        states *= v.upper - v.lower + 1;
    }
    if (states > static_cast<double>(std::uint64_t(1) << kMaxExhaustiveBits)) {
        throw SizeLimitError("exact enumeration refuses " + std::to_string(states) + " discrete states (limit 2^" +
                             std::to_string(kMaxExhaustiveBits) + ")");
    }

    detail::FeasibleArgmin collect(m);
    std::vector<double> x(m.num_variables(), 0.0);
    for (std::size_t i : discrete) x[i] = m.variable(i).lower;
    while (true) {
        std::vector<double> full = x;
        if (cont.empty() || std::isfinite(cont.optimize(full, std::numeric_limits<double>::infinity()))) {
            collect.offer(full);
        }
        // odometer over the discrete variables
        std::size_t d = 0;
        for (; d < discrete.size(); ++d) {
            const auto& v = m.variable(discrete[d]);
            if (x[discrete[d]] < v.upper) {
                x[discrete[d]] += 1;
                break;
            }
            x[discrete[d]] = v.lower;
        }
        if (d == discrete.size()) break;
    }
    return collect.finish(clock.seconds());
}

/// Largest n for fixed-cardinality enumeration.
inline constexpr std::size_t kMaxSubsetBits = 30;

/// Call fn(mask) for every n-bit mask with exactly c ones, in increasing
/// numeric order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t c, Fn&& fn) {
    if (n > kMaxSubsetBits) {
        throw SizeLimitError("subset enumeration refuses " + std::to_string(n) + " variables (limit " +
                             std::to_string(kMaxSubsetBits) + ")");
    }
    if (c > n) return;
    if (c == 0) {
        fn(std::uint64_t(0));
        return;
    }
    const std::uint64_t limit = std::uint64_t(1) << n;
    for (std::uint64_t s = (std::uint64_t(1) << c) - 1; s < limit;) {
        fn(s);
        // next mask with the same popcount
        const std::uint64_t low = s & (~s + 1);
        const std::uint64_t ripple = s + low;
        s = ripple | (((ripple ^ s) >> 2) / low);
    }
}

/// Feasible minimizers of an all-binary model among assignments with
/// exactly c ones. Allows up to 30 variables.
inline SampleSet brute_force_cardinality(const ConstrainedModel& m, std::size_t c) {
    Stopwatch clock;
    if (!m.all_binary()) throw MustBinarizeError("cardinality enumeration needs an all-binary model");
    const std::size_t n = m.num_variables();
    detail::FeasibleArgmin collect(m);
    std::vector<double> x(n);
    for_each_subset(n, c, [&](std::uint64_t mask) {
        for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>((mask >> i) & 1);
        collect.offer(x);
    });
    return collect.finish(clock.seconds());
}

}  // namespace hycqm
