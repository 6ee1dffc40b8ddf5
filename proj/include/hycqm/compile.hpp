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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hycqm/exhaustive.hpp"
#include "hycqm/io.hpp"
#include "hycqm/model.hpp"

namespace hycqm {

// ---------------------------------------------------------------------------
// QUBO <-> Ising
// ---------------------------------------------------------------------------

/// Substitute x = (s + 1) / 2. Energies agree on corresponding states.
inline IsingModel qubo_to_ising(const QuboModel& q) {
    const std::size_t n = q.num_variables();
    IsingModel m(n);
    double offset = q.offset();
    for (std::size_t i = 0; i < n; ++i) {
        m.add_linear(i, q.linear(i) / 2);
        offset += q.linear(i) / 2;
    }
    for (const auto& [uv, b] : q.quadratic()) {
        m.add_quadratic(uv.first, uv.second, b / 4);
        m.add_linear(uv.first, b / 4);
        m.add_linear(uv.second, b / 4);
        offset += b / 4;
    }
    m.set_offset(offset);
    return m;
}

/// Substitute s = 2x - 1.
inline QuboModel ising_to_qubo(const IsingModel& m) {
    const std::size_t n = m.num_variables();
    QuboModel q(n);
    double offset = m.offset();
    for (std::size_t i = 0; i < n; ++i) {
        q.add_linear(i, 2 * m.linear(i));
        offset -= m.linear(i);
    }
    for (const auto& [uv, b] : m.quadratic()) {
        q.add_quadratic(uv.first, uv.second, 4 * b);
        q.add_linear(uv.first, -2 * b);
        q.add_linear(uv.second, -2 * b);
        offset += b;
    }
    q.set_offset(offset);
    return q;
}

// ---------------------------------------------------------------------------
// Slack encoding
// ---------------------------------------------------------------------------

/// Binary slack variables y_j with weights w_j representing every integer
/// in [0, range].
struct SlackEncoding {
    std::string label;
    std::vector<std::string> slack_ids;
    std::vector<std::int64_t> weights;
    std::int64_t range = 0;

    std::int64_t max_value() const {
        std::int64_t s = 0;
        for (auto w : weights) s += w;
        return s;
    }
};

/// Log-encoding weights 1, 2, 4, ..., plus a final residual so that the
/// weights sum to `range` exactly. Uses ceil(log2(range + 1)) weights.
inline std::vector<std::int64_t> slack_weights(std::int64_t range) {
    if (range < 0) throw InfeasibleConstraintError("negative slack range");
    std::vector<std::int64_t> w;
    if (range == 0) return w;
    const int count = std::bit_width(static_cast<std::uint64_t>(range));  // ceil(log2(range + 1))
    std::int64_t used = 0;
    for (int j = 0; j + 1 < count; ++j) {
        w.push_back(std::int64_t(1) << j);
        used += w.back();
    }
    w.push_back(range - used);
    return w;
}

/// Interval [lo, hi] containing every value of `e` over the variables'
/// domains (exact for linear expressions).
template <class BoundsOf>
std::pair<double, double> expr_range(const QuadraticExpr& e, BoundsOf&& bounds_of) {
    double lo = e.offset(), hi = e.offset();
    for (const auto& [v, b] : e.linear()) {
        auto [l, u] = bounds_of(v);
        lo += std::min(b * l, b * u);
        hi += std::max(b * l, b * u);
    }
    for (const auto& [uv, b] : e.quadratic()) {
        auto [l1, u1] = bounds_of(uv.first);
        auto [l2, u2] = bounds_of(uv.second);
        double c[4];
        if (uv.first == uv.second) {
            double sq_lo = (l1 <= 0 && u1 >= 0) ? 0.0 : std::min(l1 * l1, u1 * u1);
            double sq_hi = std::max(l1 * l1, u1 * u1);
            c[0] = c[1] = b * sq_lo;
            c[2] = c[3] = b * sq_hi;
        } else {
            c[0] = b * l1 * l2;
            c[1] = b * l1 * u2;
            c[2] = b * u1 * l2;
            c[3] = b * u1 * u2;
        }
        lo += *std::min_element(c, c + 4);
        hi += *std::max_element(c, c + 4);
    }
    return {lo, hi};
}

inline auto model_bounds(const ConstrainedModel& m) {
    return [&m](const std::string& id) {
        const auto& v = m.variable(id);
        return std::pair<double, double>(v.lower, v.upper);
    };
}

/// Result of rewriting an inequality as an equality with slack.
struct InequalityEncoding {
    Constraint equality;
    SlackEncoding slack;
};

/// Rewrite `lhs <= rhs` as `lhs + sum w_j y_j == rhs` (and `lhs >= rhs` as
/// `lhs - sum w_j y_j == rhs`) with binary slack y. The slack range is the
/// distance from rhs to the extreme achievable lhs. Requires integral data
/// over discrete variables. Slack ids are `<prefix><label>_<j>`, made unique
/// against `taken`.
inline InequalityEncoding encode_inequality(const Constraint& c, const ConstrainedModel& domain,
                                            const std::string& prefix = "slack_") {
    if (c.sense == Sense::EQ) throw ValidationError("constraint '" + c.label + "' is already an equality");

    auto integral = [](double v) { return is_integral(v); };
    bool ok = integral(c.rhs) && integral(c.lhs.offset());
    for (const auto& [v, b] : c.lhs.linear()) ok = ok && integral(b) && domain.variable(v).is_discrete();
    for (const auto& [uv, b] : c.lhs.quadratic()) {
        ok = ok && integral(b) && domain.variable(uv.first).is_discrete() &&
             domain.variable(uv.second).is_discrete();
    }
    if (!ok) {
        throw UnsupportedEncodingError("constraint '" + c.label +
                                       "': slack encoding needs integral coefficients over discrete variables");
    }

    auto [lo, hi] = expr_range(c.lhs, model_bounds(domain));
    const double range = c.sense == Sense::LE ? c.rhs - lo : hi - c.rhs;
    if (range < 0) {
        throw InfeasibleConstraintError("constraint '" + c.label + "' cannot be satisfied (slack range " +
                                        std::to_string(range) + ")");
    }

    InequalityEncoding out;
    out.slack.label = c.label;
    out.slack.range = static_cast<std::int64_t>(std::llround(range));
    out.slack.weights = slack_weights(out.slack.range);

    out.equality.lhs = c.lhs;
    out.equality.sense = Sense::EQ;
    out.equality.rhs = c.rhs;
    out.equality.label = c.label;
    const double sign = c.sense == Sense::LE ? 1.0 : -1.0;
    for (std::size_t j = 0; j < out.slack.weights.size(); ++j) {
        std::string id = prefix + c.label + "_" + std::to_string(j);
        while (domain.labels()->find(id)) id += "_";
        out.equality.lhs.add_linear(id, sign * static_cast<double>(out.slack.weights[j]));
        out.slack.slack_ids.push_back(std::move(id));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integer binarization
// ---------------------------------------------------------------------------

/// x = lower + sum_j weights[j] * bit_j
struct IntegerEncoding {
    std::string id;
    double lower = 0;
    std::vector<std::string> bit_ids;
    std::vector<std::int64_t> weights;
};

/// Model with every integer variable replaced by its log-encoded bits.
struct BinarizedModel {
    ConstrainedModel model;
    std::vector<IntegerEncoding> encodings;
    LabelsPtr original_labels;

    /// Map an assignment of `model` back onto the original variables.
    std::vector<double> decode(std::span<const double> x) const {
        const Labels& orig = *original_labels;
        std::vector<double> out(orig.size());
        std::map<std::string, const IntegerEncoding*> enc;
        for (const auto& e : encodings) enc.emplace(e.id, &e);
        for (std::size_t i = 0; i < orig.size(); ++i) {
            auto it = enc.find(orig[i]);
            if (it == enc.end()) {
                out[i] = x[model.labels()->at(orig[i])];
            } else {
                double v = it->second->lower;
                for (std::size_t j = 0; j < it->second->bit_ids.size(); ++j) {
                    v += static_cast<double>(it->second->weights[j]) * x[model.labels()->at(it->second->bit_ids[j])];
                }
                out[i] = v;
            }
        }
        return out;
    }
};

inline BinarizedModel binarize_integers(const ConstrainedModel& m) {
    BinarizedModel out;
    out.original_labels = m.labels();

    // expansion of each variable as offset + sum bias * bit
    std::map<std::string, std::pair<double, std::vector<std::pair<std::string, double>>>> expansion;
    std::vector<Variable> vars;
    for (const auto& v : m.variables()) {
        if (v.vartype != Vartype::INTEGER) {
            vars.push_back(v);
            continue;
        }
        IntegerEncoding enc{v.id, v.lower, {}, slack_weights(static_cast<std::int64_t>(v.upper - v.lower))};
        std::vector<std::pair<std::string, double>> terms;
        for (std::size_t j = 0; j < enc.weights.size(); ++j) {
            std::string id = v.id + "#b" + std::to_string(j);
            while (m.labels()->find(id)) id += "_";
            vars.push_back(Variable::binary(id));
            terms.emplace_back(id, static_cast<double>(enc.weights[j]));
            enc.bit_ids.push_back(std::move(id));
        }
        expansion.emplace(v.id, std::pair(v.lower, std::move(terms)));
        out.encodings.push_back(std::move(enc));
    }

    auto rewrite = [&](const QuadraticExpr& e) {
        QuadraticExpr r(e.offset());
        for (const auto& [v, b] : e.linear()) {
            auto it = expansion.find(v);
            if (it == expansion.end()) {
                r.add_linear(v, b);
                continue;
            }
            r.add_offset(b * it->second.first);
            for (const auto& [bit, w] : it->second.second) r.add_linear(bit, b * w);
        }
        for (const auto& [uv, b] : e.quadratic()) {
            auto as_terms = [&](const std::string& v) {
                auto it = expansion.find(v);
                if (it == expansion.end()) {
                    return std::pair<double, std::vector<std::pair<std::string, double>>>(0.0, {{v, 1.0}});
                }
                return it->second;
            };
            auto [c1, t1] = as_terms(uv.first);
            auto [c2, t2] = as_terms(uv.second);
            r.add_offset(b * c1 * c2);
            for (const auto& [v, w] : t1) r.add_linear(v, b * w * c2);
            for (const auto& [v, w] : t2) r.add_linear(v, b * w * c1);
            for (const auto& [v1, w1] : t1) {
                for (const auto& [v2, w2] : t2) r.add_quadratic(v1, v2, b * w1 * w2);
            }
        }
        return r;
    };

    std::vector<Constraint> cons;
    for (const auto& c : m.constraints()) cons.push_back({rewrite(c.lhs), c.sense, c.rhs, c.label});
    out.model = ConstrainedModel(std::move(vars), rewrite(m.objective()), std::move(cons), m.metadata());
    return out;
}

// ---------------------------------------------------------------------------
// Penalty compilation
// ---------------------------------------------------------------------------

struct PenaltyConfig {
    /// explicit multipliers per constraint label; must be positive
    std::map<std::string, double> lambdas;
    /// derive a multiplier for constraints missing from `lambdas`
    bool auto_lambda = true;
};

/// Conservative uniform multiplier: 2 * (sum |objective coefficients| + |offset|) + 1,
/// so one unit of violation outweighs the objective's whole range on binaries.
inline double auto_lambda(const ConstrainedModel& m) {
    double s = std::abs(m.objective().offset());
    for (const auto& [_, b] : m.objective().linear()) s += std::abs(b);
    for (const auto& [_, b] : m.objective().quadratic()) s += std::abs(b);
    return 2 * s + 1;
}

struct LambdaEntry {
    double lambda = 0;
    std::string rule;  // "auto", "bisection" or "user"
};

using LambdaReport = std::map<std::string, LambdaEntry>;

inline json to_json(const LambdaReport& r) {
    json out = json::object();
    for (const auto& [label, e] : r) out[label] = json{{"lambda", e.lambda}, {"rule", e.rule}};
    return out;
}

/// If a quadratic constraint over binaries is (sum_i c_i x_i)^2 sense rhs
/// with non-negative integral c (x_i^2 already folded to x_i), return the
/// equivalent linear constraint sum_i c_i x_i sense' r.
inline std::optional<Constraint> linear_surrogate(const Constraint& c, const ConstrainedModel& m) {
    if (c.lhs.is_linear() || c.lhs.offset() != 0) return std::nullopt;
    std::map<std::string, double> coeff;
    for (const auto& [v, b] : c.lhs.linear()) {
        if (m.variable(v).vartype != Vartype::BINARY || b <= 0) return std::nullopt;
        double r = std::sqrt(b);
        if (!is_integral(r) || r * r != b) return std::nullopt;
        coeff.emplace(v, r);
    }
    const std::size_t n = coeff.size();
    if (c.lhs.quadratic().size() != n * (n - 1) / 2) return std::nullopt;
    for (const auto& [uv, b] : c.lhs.quadratic()) {
        auto a = coeff.find(uv.first), bb = coeff.find(uv.second);
        if (a == coeff.end() || bb == coeff.end() || b != 2 * a->second * bb->second) return std::nullopt;
    }

    // the linear form takes non-negative integer values t; t^2 sense rhs
    Constraint out;
    out.label = c.label;
    for (const auto& [v, r] : coeff) out.lhs.add_linear(v, r);
    const double root = c.rhs <= 0 ? 0.0 : std::sqrt(c.rhs);
    switch (c.sense) {
        case Sense::GE:
            out.sense = Sense::GE;
            out.rhs = c.rhs <= 0 ? 0.0 : std::ceil(root - 1e-12);
            break;
        case Sense::LE:
            if (c.rhs < 0) return std::nullopt;
            out.sense = Sense::LE;
            out.rhs = std::floor(root + 1e-12);
            break;
        case Sense::EQ:
            if (c.rhs < 0 || !is_integral(std::round(root)) || std::round(root) * std::round(root) != c.rhs) {
                return std::nullopt;
            }
            out.sense = Sense::EQ;
            out.rhs = std::round(root);
            break;
    }
    return out;
}

/// Penalized unconstrained form F(x) = Obj(x) + sum_k lambda_k P_k(x)^2 of
/// an all-binary model.
struct CompiledQubo {
    QuboModel qubo;
    /// QUBO index -> name; the model's variables first, then slack bits
    LabelsPtr labels;
    std::size_t num_model_variables = 0;
    std::vector<SlackEncoding> slacks;
    LambdaReport report;
    /// quadratic constraints without a linear surrogate; left to
    /// feasibility filtering
    std::vector<std::string> unpenalized;

    /// The model part of a QUBO state.
    std::vector<double> model_values(std::span<const std::uint8_t> bits) const {
        return {bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(num_model_variables)};
    }
};

namespace detail {

/// qubo += lambda * (sum_t a_t x_t + c0)^2 over binary x.
inline void add_squared_penalty(QuboModel& q, std::vector<std::pair<index_type, double>> terms, double c0,
                                double lambda) {
    std::sort(terms.begin(), terms.end());
    std::vector<std::pair<index_type, double>> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().first == t.first) {
            merged.back().second += t.second;
        } else {
            merged.push_back(t);
        }
    }
    for (std::size_t a = 0; a < merged.size(); ++a) {
        const auto [i, ai] = merged[a];
        q.add_linear(i, lambda * (ai * ai + 2 * c0 * ai));
        for (std::size_t b = a + 1; b < merged.size(); ++b) {
            q.add_quadratic(i, merged[b].first, 2 * lambda * ai * merged[b].second);
        }
    }
    q.add_offset(lambda * c0 * c0);
}

}  // namespace detail

/// Compile an all-binary ConstrainedModel into a penalized QUBO. Linear
/// inequalities get log-encoded slack; equalities are squared directly.
/// Quadratic constraints are never squared (that would be quartic): a
/// square-of-linear constraint is replaced by its linear surrogate, others
/// are listed in `unpenalized`.
inline CompiledQubo compile_penalties(const ConstrainedModel& m, const PenaltyConfig& cfg = {}) {
    for (const auto& v : m.variables()) {
        if (v.vartype != Vartype::BINARY) {
            throw MustBinarizeError("variable '" + v.id + "' is " + std::string(to_string(v.vartype)) +
                                    "; compile_penalties needs an all-binary model");
        }
    }
    for (const auto& [label, lam] : cfg.lambdas) {
        if (!(lam > 0)) throw ValidationError("penalty multiplier for '" + label + "' must be positive");
    }

    const double lam_auto = auto_lambda(m);
    auto lambda_for = [&](const std::string& label) -> LambdaEntry {
        if (auto it = cfg.lambdas.find(label); it != cfg.lambdas.end()) return {it->second, "user"};
        if (!cfg.auto_lambda) throw ValidationError("no penalty multiplier for constraint '" + label + "'");
        return {lam_auto, "auto"};
    };

    // equality forms first, to know the slack count
    std::vector<Constraint> equalities;
    std::vector<std::string> names = m.labels()->names();
    CompiledQubo out;
    for (const auto& c : m.constraints()) {
        Constraint lin = c;
        if (!c.lhs.is_linear()) {
            auto sur = linear_surrogate(c, m);
            if (!sur) {
                out.unpenalized.push_back(c.label);
                continue;
            }
            lin = std::move(*sur);
        }
        if (lin.sense == Sense::EQ) {
            equalities.push_back(std::move(lin));
            continue;
        }
        auto enc = encode_inequality(lin, m);
        for (const auto& id : enc.slack.slack_ids) names.push_back(id);
        equalities.push_back(std::move(enc.equality));
        out.slacks.push_back(std::move(enc.slack));
    }

    out.labels = make_labels(std::move(names));
    out.num_model_variables = m.num_variables();
    out.qubo = QuboModel(out.labels->size());
    QuboModel& q = out.qubo;

    const auto& obj = m.indexed_objective();
    for (const auto& [v, b] : obj.linear) q.add_linear(v, b);
    for (const auto& [u, v, b] : obj.quadratic) q.add_quadratic(u, v, b);
    q.add_offset(obj.offset);

    for (const auto& c : equalities) {
        LambdaEntry lam = lambda_for(c.label);
        std::vector<std::pair<index_type, double>> terms;
        for (const auto& [v, b] : c.lhs.linear()) terms.emplace_back(out.labels->at(v), b);
        detail::add_squared_penalty(q, std::move(terms), c.lhs.offset() - c.rhs, lam.lambda);
        out.report.emplace(c.label, lam);
    }
    return out;
}

/// Suggested multipliers with the rule that produced them.
struct LambdaSuggestion {
    std::map<std::string, double> lambdas;
    LambdaReport report;
    /// false when the model was too large for the exact refinement
    bool refined = false;
};

/// Binary search over the grid lambda_auto * 2^-j (j = 0..grid_steps) for
/// the smallest uniform multiplier whose penalized argmin set is entirely
/// feasible, verified by exhaustive enumeration. Models with more than
/// `max_exact_bits` post-slack binaries get the auto rule unrefined.
inline LambdaSuggestion suggest_lambda(const ConstrainedModel& m, std::size_t max_exact_bits = 20,
                                       int grid_steps = 24) {
    LambdaSuggestion out;
    if (m.num_constraints() == 0) return out;

    const double lam_auto = auto_lambda(m);
    auto uniform = [&](double lam) {
        PenaltyConfig cfg;
        cfg.auto_lambda = false;
        for (const auto& c : m.constraints()) cfg.lambdas[c.label] = lam;
        return cfg;
    };
    auto finish = [&](double lam, const char* rule) {
        for (const auto& c : m.constraints()) {
            out.lambdas[c.label] = lam;
            out.report[c.label] = {lam, rule};
        }
        return out;
    };

    CompiledQubo probe = compile_penalties(m, uniform(lam_auto));
    if (probe.qubo.num_variables() > max_exact_bits) return finish(lam_auto, "auto");

    auto argmin_feasible = [&](int j) {
        CompiledQubo cq = compile_penalties(m, uniform(std::ldexp(lam_auto, -j)));
        QuboLandscape land(cq.qubo);
        auto res = enumerate_minima(land);
        for (const auto& bits : res.argmin) {
            if (!m.is_feasible(cq.model_values(bits))) return false;
        }
        return true;
    };

    if (!argmin_feasible(0)) return finish(lam_auto, "auto");
    out.refined = true;
    if (argmin_feasible(grid_steps)) return finish(std::ldexp(lam_auto, -grid_steps), "bisection");
    int lo = 0, hi = grid_steps;  // ok(lo), !ok(hi)
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (argmin_feasible(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return finish(std::ldexp(lam_auto, -lo), "bisection");
}

}  // namespace hycqm
