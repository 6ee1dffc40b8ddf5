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
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hycqm/io.hpp"
#include "hycqm/model.hpp"
#include "hycqm/random.hpp"

namespace hycqm {

// Unit commitment with piecewise-linear production cost and
// downtime-dependent startup categories. Periods are 1..T; period 0 is the
// fixed initial state.

struct Generator {
    std::string name;
    double pmin = 0;  // MW
    double pmax = 0;  // MW
    /// cost per MWh on each production segment above pmin; segments split
    /// [pmin, pmax] evenly
    std::vector<double> slopes{0.0};
    /// cost of running at pmin for one period
    double min_power_cost = 0;
    /// startup cost per category, hottest first; non-decreasing
    std::vector<double> startup_costs{0.0};
    /// category s (s < S) covers downtimes up to downtime_limits[s] periods;
    /// the last category takes every longer downtime
    std::vector<int> downtime_limits;
    int min_up = 1;
    int min_down = 1;
    /// > 0: on for that many periods before period 1; < 0: off for that many
    int initial_status = -1000;

    std::size_t segments() const { return slopes.size(); }
    std::size_t categories() const { return startup_costs.size(); }
    double segment_width() const { return (pmax - pmin) / static_cast<double>(segments()); }

    /// Startup category for a start after `downtime` periods off.
    std::size_t category(int downtime) const {
        for (std::size_t s = 0; s < downtime_limits.size(); ++s) {
            if (downtime <= downtime_limits[s]) return s;
        }
        return categories() - 1;
    }
};

struct UcSpec {
    std::vector<Generator> generators;
    std::vector<double> demand;  // MW per period

    std::size_t G() const { return generators.size(); }
    std::size_t T() const { return demand.size(); }

    void validate() const {
        if (generators.empty()) throw ValidationError("unit commitment needs at least one generator");
        if (demand.empty()) throw ValidationError("unit commitment needs at least one period");
        double cap = 0;
        for (const auto& g : generators) {
            const std::string who = "generator '" + g.name + "'";
            if (g.name.empty()) throw ValidationError("generator with empty name");
            if (!(g.pmin >= 0 && g.pmin <= g.pmax)) throw ValidationError(who + ": needs 0 <= pmin <= pmax");
            if (g.slopes.empty()) throw ValidationError(who + ": needs at least one segment");
            if (g.startup_costs.empty()) throw ValidationError(who + ": needs at least one startup category");
            if (!std::is_sorted(g.startup_costs.begin(), g.startup_costs.end())) {
                throw ValidationError(who + ": startup costs must not decrease from hot to cold");
            }
            if (g.downtime_limits.size() + 1 != g.categories()) {
                throw ValidationError(who + ": needs one downtime limit per category except the coldest");
            }
            if (!std::is_sorted(g.downtime_limits.begin(), g.downtime_limits.end())) {
                throw ValidationError(who + ": downtime limits must increase");
            }
            if (g.min_up < 1 || g.min_down < 1) throw ValidationError(who + ": minimum up/down times are >= 1");
            if (g.initial_status == 0) throw ValidationError(who + ": initial status must be nonzero");
            cap += g.pmax;
        }
        for (std::size_t t = 0; t < demand.size(); ++t) {
            if (!(demand[t] >= 0)) throw ValidationError("demand must be non-negative");
            if (demand[t] > cap + 1e-9) {
                throw InfeasibleSpecError("demand " + std::to_string(demand[t]) + " MW in period " +
                                          std::to_string(t + 1) + " exceeds total capacity " + std::to_string(cap));
            }
        }
    }
};

inline std::string uc_u(const Generator& g, std::size_t t) { return "u_" + g.name + "_" + std::to_string(t); }
inline std::string uc_d(const Generator& g, std::size_t t, std::size_t s) {
    return "d_" + g.name + "_" + std::to_string(t) + "_" + std::to_string(s + 1);
}
inline std::string uc_p(const Generator& g, std::size_t l, std::size_t t) {
    return "p_" + g.name + "_" + std::to_string(l + 1) + "_" + std::to_string(t);
}

/// Commitment status of g in period t <= 0 implied by its initial status.
inline bool uc_initially_on(const Generator& g, int t) {
    if (g.initial_status > 0) return t > -g.initial_status;
    return t <= g.initial_status;
}

// ---------------------------------------------------------------------------
// Commitment checks shared by the model and the oracle
// ---------------------------------------------------------------------------

namespace detail {

/// u(t) for t in [1 - lookback, T]; earlier periods from the initial status.
inline bool uc_status(const Generator& g, const std::vector<std::uint8_t>& u, int t) {
    return t >= 1 ? u[static_cast<std::size_t>(t - 1)] != 0 : uc_initially_on(g, t);
}

/// Minimum up/down times, including what is left over from before period 1.
inline bool uc_commitment_ok(const Generator& g, const std::vector<std::uint8_t>& u) {
    const int T = static_cast<int>(u.size());
    for (int t = 1; t <= T; ++t) {
        const bool now = uc_status(g, u, t), before = uc_status(g, u, t - 1);
        if (now && !before) {
            for (int tau = t; tau <= std::min(T, t + g.min_up - 1); ++tau) {
                if (!uc_status(g, u, tau)) return false;
            }
        }
        if (!now && before) {
            for (int tau = t; tau <= std::min(T, t + g.min_down - 1); ++tau) {
                if (uc_status(g, u, tau)) return false;
            }
        }
    }
    // leftovers of the initial state
    if (g.initial_status > 0) {
        for (int t = 1; t <= std::min(T, g.min_up - g.initial_status); ++t) {
            if (!u[static_cast<std::size_t>(t - 1)]) return false;
        }
    } else {
        for (int t = 1; t <= std::min(T, g.min_down + g.initial_status); ++t) {
            if (u[static_cast<std::size_t>(t - 1)]) return false;
        }
    }
    return true;
}

/// Periods off immediately before a start in period t.
inline int uc_downtime(const Generator& g, const std::vector<std::uint8_t>& u, int t) {
    int d = 0;
    for (int tau = t - 1; !uc_status(g, u, tau); --tau) ++d;
    return d;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

/// Variables u_g_t, d_g_t_s (binary) and p_g_l_t in [0, width] (continuous).
/// Objective: sum slope * p + min_power_cost * u + startup cost * d.
/// Rows: balance_t, seg_g_l_t (p <= width u), minup_g_t_tau, mindown_g_t_tau,
/// init_g_t (carried-over up/down time), start_g_t (sum_s d >= u(t) - u(t-1)),
/// onecat_g_t (sum_s d <= 1) and window_g_t_s (category s only if the unit
/// was on within its downtime window).
inline ConstrainedModel gen_unit_commitment(const UcSpec& spec);

struct UcSolution {
    double cost = 0;
    /// commitment[g][t-1]
    std::vector<std::vector<std::uint8_t>> commitment;
    /// power[g][t-1], total output in MW
    std::vector<std::vector<double>> power;
};

namespace detail {

/// Cheapest dispatch of period t for fixed commitments by merit order over
/// all committed segments. Returns nullopt if demand is out of reach.
inline std::optional<double> uc_dispatch(const UcSpec& spec, const std::vector<std::vector<std::uint8_t>>& u,
                                         std::size_t t, std::vector<double>* power = nullptr) {
    double base = 0, room = 0;
    std::vector<std::tuple<double, double, std::size_t>> segs;  // slope, width, generator
    for (std::size_t g = 0; g < spec.G(); ++g) {
        if (!u[g][t]) continue;
        const auto& gen = spec.generators[g];
        base += gen.pmin;
        for (double slope : gen.slopes) segs.emplace_back(slope, gen.segment_width(), g);
        room += gen.pmax - gen.pmin;
    }
    const double tol = 1e-9 * std::max(1.0, spec.demand[t]);
    if (spec.demand[t] < base - tol || spec.demand[t] > base + room + tol) return std::nullopt;
    std::stable_sort(segs.begin(), segs.end(), [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    double cost = 0;
    double left = std::max(0.0, spec.demand[t] - base);
    if (power) {
        power->assign(spec.G(), 0.0);
        for (std::size_t g = 0; g < spec.G(); ++g) {
            if (u[g][t]) (*power)[g] = spec.generators[g].pmin;
        }
    }
    for (const auto& [slope, width, g] : segs) {
        const double take = std::min(left, width);
        cost += slope * take;
        left -= take;
        if (power) (*power)[g] += take;
    }
    return cost;
}

}  // namespace detail

namespace detail {

inline bool uc_all_ok(const UcSpec& spec, const std::vector<std::vector<std::uint8_t>>& u) {
    for (std::size_t g = 0; g < spec.G(); ++g) {
        if (!uc_commitment_ok(spec.generators[g], u[g])) return false;
    }
    for (std::size_t t = 0; t < u.front().size(); ++t) {
        if (!uc_dispatch(spec, u, t)) return false;
    }
    return true;
}

inline constexpr std::size_t kMaxUcSearchGenerators = 16;

/// Some commitment schedule meeting demand and up/down times, or nullopt.
/// Tries every unit on, then one fixed set for the whole horizon, then a
/// period-by-period search (G <= 16) that remembers dead ends by the
/// recent history of each unit. Nullopt from the search is a proof of
/// infeasibility; for larger fleets it only means nothing was found.
inline std::optional<std::vector<std::vector<std::uint8_t>>> uc_find_schedule(const UcSpec& spec) {
    const std::size_t G = spec.G(), T = spec.T();
    using Schedule = std::vector<std::vector<std::uint8_t>>;
    Schedule u(G, std::vector<std::uint8_t>(T, 1));
    if (uc_all_ok(spec, u)) return u;

    std::vector<std::size_t> order(G);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = spec.generators[a];
        const auto& y = spec.generators[b];
        return x.pmax - x.pmin > y.pmax - y.pmin;
    });
    const double lo = *std::min_element(spec.demand.begin(), spec.demand.end());
    const double hi = *std::max_element(spec.demand.begin(), spec.demand.end());
    double base = 0, cap = 0;
    for (auto& row : u) std::fill(row.begin(), row.end(), 0);
    for (std::size_t g : order) {
        if (cap >= hi) break;
        if (base + spec.generators[g].pmin > lo) continue;
        base += spec.generators[g].pmin;
        cap += spec.generators[g].pmax;
        std::fill(u[g].begin(), u[g].end(), 1);
    }
    if (uc_all_ok(spec, u)) return u;
    if (G > kMaxUcSearchGenerators) return std::nullopt;

    int lookback = 1;
    for (const auto& g : spec.generators) lookback = std::max({lookback, g.min_up, g.min_down});
    std::set<std::pair<std::size_t, std::vector<std::uint64_t>>> dead;
    Schedule prefix(G);
    auto key = [&](std::size_t t) {
        std::vector<std::uint64_t> k;
        for (std::size_t s = t > static_cast<std::size_t>(lookback) ? t - static_cast<std::size_t>(lookback) : 0; s < t; ++s) {
            std::uint64_t col = 0;
            for (std::size_t g = 0; g < G; ++g) col |= std::uint64_t(prefix[g][s]) << g;
            k.push_back(col);
        }
        return std::pair{t, k};
    };
    std::function<bool(std::size_t)> extend = [&](std::size_t t) {
        if (t == T) return true;
        if (dead.count(key(t))) return false;
        std::uint64_t prev = 0;
        for (std::size_t g = 0; t > 0 && g < G; ++g) prev |= std::uint64_t(prefix[g][t - 1]) << g;
        for (std::uint64_t i = 0; i < (std::uint64_t(1) << G); ++i) {
            const std::uint64_t mask = i ^ prev;  // unchanged commitments first
            double p_lo = 0, p_hi = 0;
            for (std::size_t g = 0; g < G; ++g) {
                if ((mask >> g) & 1) {
                    p_lo += spec.generators[g].pmin;
                    p_hi += spec.generators[g].pmax;
                }
            }
            const double tol = 1e-9 * std::max(1.0, spec.demand[t]);
            if (spec.demand[t] < p_lo - tol || spec.demand[t] > p_hi + tol) continue;
            bool ok = true;
            for (std::size_t g = 0; g < G; ++g) prefix[g].push_back(static_cast<std::uint8_t>((mask >> g) & 1));
            for (std::size_t g = 0; g < G && ok; ++g) ok = uc_commitment_ok(spec.generators[g], prefix[g]);
            if (ok && extend(t + 1)) return true;
            for (auto& row : prefix) row.pop_back();
        }
        dead.insert(key(t));
        return false;
    };
    if (extend(0)) return prefix;
    return std::nullopt;
}

}  // namespace detail

inline constexpr std::size_t kMaxUcOracleBits = 16;

/// Exact optimum by enumerating every commitment pattern (G * T <= 16, one
/// segment per generator), checking up/down times, dispatching each period
/// by merit order and charging each start at its downtime category.
inline std::optional<UcSolution> uc_oracle(const UcSpec& spec) {
    spec.validate();
    const std::size_t G = spec.G(), T = spec.T();
    if (G > 4 || T > 4 || G * T > kMaxUcOracleBits) throw SizeLimitError("uc_oracle handles G <= 4 and T <= 4");
    for (const auto& g : spec.generators) {
        if (g.segments() != 1) throw ValidationError("uc_oracle needs a single production segment");
    }
    std::optional<UcSolution> best;
    std::vector<std::vector<std::uint8_t>> u(G, std::vector<std::uint8_t>(T));
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << (G * T)); ++mask) {
        for (std::size_t g = 0; g < G; ++g) {
            for (std::size_t t = 0; t < T; ++t) u[g][t] = static_cast<std::uint8_t>((mask >> (g * T + t)) & 1);
        }
        double cost = 0;
        bool ok = true;
        for (std::size_t g = 0; g < G && ok; ++g) {
            const auto& gen = spec.generators[g];
            ok = detail::uc_commitment_ok(gen, u[g]);
            for (std::size_t t = 1; t <= T && ok; ++t) {
                if (!u[g][t - 1]) continue;
                cost += gen.min_power_cost;
                if (!detail::uc_status(gen, u[g], static_cast<int>(t) - 1)) {
                    cost += gen.startup_costs[gen.category(detail::uc_downtime(gen, u[g], static_cast<int>(t)))];
                }
            }
        }
        for (std::size_t t = 0; t < T && ok; ++t) {
            const auto c = detail::uc_dispatch(spec, u, t);
            ok = c.has_value();
            if (ok) cost += *c;
        }
        if (!ok || (best && cost >= best->cost)) continue;
        UcSolution sol{cost, u, std::vector<std::vector<double>>(G, std::vector<double>(T))};
        std::vector<double> p;
        for (std::size_t t = 0; t < T; ++t) {
            detail::uc_dispatch(spec, u, t, &p);
            for (std::size_t g = 0; g < G; ++g) sol.power[g][t] = p[g];
        }
        best = std::move(sol);
    }
    return best;
}

inline ConstrainedModel gen_unit_commitment(const UcSpec& spec) {
    spec.validate();
    const std::size_t T = spec.T();
    ModelBuilder b;
    QuadraticExpr obj;

    // u(t) as an expression; periods <= 0 are constants
    auto u_expr = [&](const Generator& g, int t) {
        QuadraticExpr e;
        if (t >= 1) {
            e.add_linear(uc_u(g, static_cast<std::size_t>(t)), 1.0);
        } else if (uc_initially_on(g, t)) {
            e.add_offset(1.0);
        }
        return e;
    };
    auto add_row = [&](QuadraticExpr e, Sense sense, double rhs, std::string label) {
        // move constants to the right-hand side; drop rows with no variables
        rhs -= e.offset();
        e.set_offset(0);
        if (e.linear().empty() && e.quadratic().empty()) {
            if (violation(sense, 0.0, rhs) > 0) {
                throw InfeasibleSpecError("row '" + label + "' cannot be met by any commitment");
            }
            return;
        }
        b.add_constraint(std::move(e), sense, rhs, std::move(label));
    };

    for (const auto& g : spec.generators) {
        for (std::size_t t = 1; t <= T; ++t) {
            b.add_binary(uc_u(g, t));
            obj.add_linear(uc_u(g, t), g.min_power_cost);
            for (std::size_t s = 0; s < g.categories(); ++s) {
                b.add_binary(uc_d(g, t, s));
                obj.add_linear(uc_d(g, t, s), g.startup_costs[s]);
            }
            for (std::size_t l = 0; l < g.segments(); ++l) {
                b.add_continuous(uc_p(g, l, t), 0.0, g.segment_width());
                obj.add_linear(uc_p(g, l, t), g.slopes[l]);
            }
        }
    }
    b.set_objective(std::move(obj));

    for (std::size_t t = 1; t <= T; ++t) {
        QuadraticExpr e;
        for (const auto& g : spec.generators) {
            e.add_linear(uc_u(g, t), g.pmin);
            for (std::size_t l = 0; l < g.segments(); ++l) e.add_linear(uc_p(g, l, t), 1.0);
        }
        b.add_constraint(std::move(e), Sense::EQ, spec.demand[t - 1], "balance_" + std::to_string(t));
    }

    for (const auto& g : spec.generators) {
        const std::string gt = g.name + "_";
        for (std::size_t t = 1; t <= T; ++t) {
            const int ti = static_cast<int>(t);
            const std::string tag = gt + std::to_string(t);
            for (std::size_t l = 0; l < g.segments(); ++l) {
                QuadraticExpr e;
                e.add_linear(uc_p(g, l, t), 1.0).add_linear(uc_u(g, t), -g.segment_width());
                b.add_constraint(std::move(e), Sense::LE, 0.0, "seg_" + gt + std::to_string(l + 1) + "_" + std::to_string(t));
            }
            // a start at t keeps the unit on through t + min_up - 1
            for (int tau = ti + 1; tau <= std::min<int>(static_cast<int>(T), ti + g.min_up - 1); ++tau) {
                QuadraticExpr e = u_expr(g, tau);
                e += -1.0 * u_expr(g, ti);
                e += u_expr(g, ti - 1);
                add_row(std::move(e), Sense::GE, 0.0, "minup_" + tag + "_" + std::to_string(tau));
            }
            // a stop at t keeps it off through t + min_down - 1
            for (int tau = ti + 1; tau <= std::min<int>(static_cast<int>(T), ti + g.min_down - 1); ++tau) {
                QuadraticExpr e = u_expr(g, tau);
                e += -1.0 * u_expr(g, ti);
                e += u_expr(g, ti - 1);
                add_row(std::move(e), Sense::LE, 1.0, "mindown_" + tag + "_" + std::to_string(tau));
            }
            const int left_up = g.initial_status > 0 ? g.min_up - g.initial_status : 0;
            const int left_down = g.initial_status < 0 ? g.min_down + g.initial_status : 0;
            if (ti <= left_up) add_row(u_expr(g, ti), Sense::EQ, 1.0, "init_" + tag);
            if (ti <= left_down) add_row(u_expr(g, ti), Sense::EQ, 0.0, "init_" + tag);

            QuadraticExpr start;
            QuadraticExpr one;
            for (std::size_t s = 0; s < g.categories(); ++s) {
                start.add_linear(uc_d(g, t, s), 1.0);
                one.add_linear(uc_d(g, t, s), 1.0);
            }
            start += -1.0 * u_expr(g, ti);
            start += u_expr(g, ti - 1);
            add_row(std::move(start), Sense::GE, 0.0, "start_" + tag);
            b.add_constraint(std::move(one), Sense::LE, 1.0, "onecat_" + tag);

            // category s needs the last on-period within its downtime window
            int lo = 1;
            for (std::size_t s = 0; s + 1 < g.categories(); ++s) {
                const int hi = g.downtime_limits[s];
                QuadraticExpr e;
                e.add_linear(uc_d(g, t, s), 1.0);
                for (int i = lo + 1; i <= hi + 1; ++i) e += -1.0 * u_expr(g, ti - i);
                add_row(std::move(e), Sense::LE, 0.0, "window_" + tag + "_" + std::to_string(s + 1));
                lo = hi + 1;
            }
        }
    }
    b.set_metadata("family", "uc")
        .set_metadata("G", std::to_string(spec.G()))
        .set_metadata("T", std::to_string(T))
        .set_metadata("initial_state", "per generator initial_status; default off for 1000 periods");
    ConstrainedModel m = std::move(b).build();

    if (!detail::uc_find_schedule(spec)) {
        throw InfeasibleSpecError("unit commitment spec has no feasible commitment schedule");
    }
    return m;
}

/// Model assignment of an oracle schedule, with the cheapest startup
/// category of each start and segment powers filled in merit order.
inline std::vector<double> uc_assignment(const UcSpec& spec, const ConstrainedModel& m, const UcSolution& sol) {
    std::vector<double> x(m.num_variables(), 0.0);
    auto set = [&](const std::string& id, double v) { x[m.labels()->at(id)] = v; };
    for (std::size_t g = 0; g < spec.G(); ++g) {
        const auto& gen = spec.generators[g];
        for (std::size_t t = 1; t <= spec.T(); ++t) {
            const int ti = static_cast<int>(t);
            set(uc_u(gen, t), sol.commitment[g][t - 1]);
            if (sol.commitment[g][t - 1] && !detail::uc_status(gen, sol.commitment[g], ti - 1)) {
                set(uc_d(gen, t, gen.category(detail::uc_downtime(gen, sol.commitment[g], ti))), 1.0);
            }
            double above = std::max(0.0, sol.power[g][t - 1] - (sol.commitment[g][t - 1] ? gen.pmin : 0.0));
            for (std::size_t l = 0; l < gen.segments(); ++l) {
                const double take = std::min(above, gen.segment_width());
                set(uc_p(gen, l, t), take);
                above -= take;
            }
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Random fleets and JSON
// ---------------------------------------------------------------------------

/// Synthetic fleet: pmin in [10, 50], pmax - pmin in [20, 100], slopes in
/// [10, 40] increasing per segment, min-power cost in [50, 200], hot start
/// in [100, 500] with each colder category 1.5x dearer, hot window of 4
/// periods, min up/down in {1, 2}, every unit off long before period 1.
/// Demand per period is drawn in [0.3, 0.9] of capacity and redrawn until
/// some set of units can meet it.
inline UcSpec random_uc_spec(std::size_t G, std::size_t T, std::size_t S = 1, std::size_t segments = 1,
                             std::uint64_t seed = kDefaultSeed) {
    if (G < 1 || T < 1 || S < 1 || segments < 1) throw ValidationError("G, T, S and segments must be >= 1");
    Rng rng(seed);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    UcSpec spec;
    double cap = 0;
    for (std::size_t g = 0; g < G; ++g) {
        Generator gen;
        gen.name = "g" + std::to_string(g + 1);
        gen.pmin = std::round(in(10, 50));
        gen.pmax = gen.pmin + std::round(in(20, 100));
        gen.slopes.clear();
        double slope = in(10, 40);
        for (std::size_t l = 0; l < segments; ++l) {
            gen.slopes.push_back(std::round(slope * 100) / 100);
            slope += in(0, 5);
        }
        gen.min_power_cost = std::round(in(50, 200));
        gen.startup_costs.clear();
        double cs = std::round(in(100, 500));
        for (std::size_t s = 0; s < S; ++s) {
            gen.startup_costs.push_back(cs);
            cs = std::round(cs * 1.5);
        }
        for (std::size_t s = 0; s + 1 < S; ++s) gen.downtime_limits.push_back(4 * static_cast<int>(s + 1));
        gen.min_up = 1 + static_cast<int>(rng.below(2));
        gen.min_down = 1 + static_cast<int>(rng.below(2));
        cap += gen.pmax;
        spec.generators.push_back(std::move(gen));
    }
    for (std::size_t t = 0; t < T; ++t) {
        while (true) {
            const double d = std::round(in(0.3, 0.9) * cap);
            bool reachable = false;
            for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << std::min<std::size_t>(G, 20)) && !reachable; ++mask) {
                double lo = 0, hi = 0;
                for (std::size_t g = 0; g < G; ++g) {
                    if ((mask >> g) & 1) {
                        lo += spec.generators[g].pmin;
                        hi += spec.generators[g].pmax;
                    }
                }
                reachable = lo <= d && d <= hi;
            }
            if (reachable) {
                spec.demand.push_back(d);
                break;
            }
        }
    }
    return spec;
}

inline json to_json(const UcSpec& spec) {
    json gens = json::array();
    for (const auto& g : spec.generators) {
        gens.push_back(json{{"name", g.name},
                            {"pmin", g.pmin},
                            {"pmax", g.pmax},
                            {"slopes", g.slopes},
                            {"min_power_cost", g.min_power_cost},
                            {"startup_costs", g.startup_costs},
                            {"downtime_limits", g.downtime_limits},
                            {"min_up", g.min_up},
                            {"min_down", g.min_down},
                            {"initial_status", g.initial_status}});
    }
    return json{{"demand", spec.demand}, {"generators", std::move(gens)}};
}

/// Fleet spec: {"demand": [...], "generators": [...]} with the fields of
/// to_json(UcSpec), or {"random": {"G", "T", "S", "segments", "seed"}}.
inline UcSpec uc_spec_from_json(const json& j) {
    try {
        if (j.contains("random")) {
            const json& r = j.at("random");
            return random_uc_spec(r.at("G").get<std::size_t>(), r.at("T").get<std::size_t>(),
                                  r.value("S", std::size_t(1)), r.value("segments", std::size_t(1)),
                                  r.value("seed", kDefaultSeed));
        }
        UcSpec spec;
        spec.demand = j.at("demand").get<std::vector<double>>();
        for (const auto& gj : j.at("generators")) {
            Generator g;
            g.name = gj.at("name").get<std::string>();
            g.pmin = gj.at("pmin").get<double>();
            g.pmax = gj.at("pmax").get<double>();
            g.slopes = gj.value("slopes", std::vector<double>{0.0});
            g.min_power_cost = gj.value("min_power_cost", 0.0);
            g.startup_costs = gj.value("startup_costs", std::vector<double>{0.0});
            g.downtime_limits = gj.value("downtime_limits", std::vector<int>{});
            if (!gj.contains("downtime_limits")) {
                for (std::size_t s = 0; s + 1 < g.startup_costs.size(); ++s) g.downtime_limits.push_back(4 * static_cast<int>(s + 1));
            }
            g.min_up = gj.value("min_up", 1);
            g.min_down = gj.value("min_down", 1);
            g.initial_status = gj.value("initial_status", -1000);
            spec.generators.push_back(std::move(g));
        }
        spec.validate();
        return spec;
    } catch (const json::exception& e) {
        throw ParseError(std::string("fleet spec: ") + e.what(), 0, "");
    }
}

}  // namespace hycqm
