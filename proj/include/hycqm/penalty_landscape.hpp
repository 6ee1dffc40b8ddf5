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
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hycqm/compile.hpp"
#include "hycqm/landscape.hpp"
#include "hycqm/mixed.hpp"
#include "hycqm/model.hpp"

namespace hycqm {

/// Generalized automatic multiplier: 2 * (sum over objective terms of
/// |coefficient| times the largest magnitude the term can take, plus
/// |offset|) + 1. Equals auto_lambda on all-binary models.
inline double auto_lambda_bounded(const ConstrainedModel& m) {
    auto mag = [&](const std::string& id) {
        const auto& v = m.variable(id);
        return std::max(std::abs(v.lower), std::abs(v.upper));
    };
    double s = std::abs(m.objective().offset());
    for (const auto& [v, b] : m.objective().linear()) s += std::abs(b) * mag(v);
    for (const auto& [uv, b] : m.objective().quadratic()) s += std::abs(b) * mag(uv.first) * mag(uv.second);
    return 2 * s + 1;
}

/// Sub-QUBO over a chosen set of free binaries with every other binary
/// clamped at its current value. Inequality rows carry freshly sized slack
/// bits, appended after the free variables.
struct SubQubo {
    QuboModel qubo;
    std::vector<std::size_t> free;
    /// landscape energy = min over slack bits of (qubo energy) + clamp_offset
    /// for models whose rows are linear with integral data
    double clamp_offset = 0;
    std::size_t num_slack = 0;
};

/// The penalized energy of a binary/continuous model as a single-flip
/// landscape over its binary variables, without materializing a QUBO:
///
///   E(x) = objective + sum_k lambda_k p_k(v_k) + continuous profile
///
/// v_k is the violation of row k. p(v) = v^2 for rows with integral data on
/// discrete variables, which equals minimizing the log-slack penalty of the
/// compiled QUBO over its slack bits; other rows use v + v^2. Quadratic
/// constraints that are squares of a linear form use that linear form.
/// When continuous variables are present, the profile is the optimum over
/// them of their objective terms plus lambda times the violation of the
/// rows they appear in, cached per assignment of the coupled binaries.
class PenaltyLandscape {
 public:
    explicit PenaltyLandscape(const ConstrainedModel& m, const PenaltyConfig& cfg = {})
            : s_(std::make_shared<Structure>(m, cfg)),
              cache_(std::make_shared<std::unordered_map<std::string, double>>()) {
        const Structure& s = *s_;
        x_.assign(s.nb, 0);
        xfull_.assign(s.model.num_variables(), 0.0);
        for (std::size_t i = 0; i < xfull_.size(); ++i) xfull_[i] = s.model.variable(i).lower;
        reset(x_);
    }

    std::size_t size() const { return x_.size(); }
    double energy() const { return energy_; }
    std::span<const std::uint8_t> state() const { return x_; }

    double delta(std::size_t i) const {
        const Structure& s = *s_;
        const double sign = x_[i] ? -1.0 : 1.0;
        double d = sign * field_[i];
        for (std::size_t t = s.var_rows_start[i]; t < s.var_rows_start[i + 1]; ++t) {
            const auto [k, a] = s.var_rows[t];
            d += s.rows[k].penalty(act_[k] + sign * a) - s.rows[k].penalty(act_[k]);
        }
        for (std::size_t t = s.var_qrows_start[i]; t < s.var_qrows_start[i + 1]; ++t) {
            const auto [q, slot] = s.var_qrows[t];
            const double a = qact_[q];
            d += s.qrows[q].row.penalty(a + sign * qfield_[q][slot]) - s.qrows[q].row.penalty(a);
        }
        if (s.coupled[i]) d += profile_flipped(i) - profile_;
        return d;
    }

    void flip(std::size_t i) {
        const Structure& s = *s_;
        const double sign = x_[i] ? -1.0 : 1.0;
        double d = sign * field_[i];
        for (std::size_t t = s.var_rows_start[i]; t < s.var_rows_start[i + 1]; ++t) {
            const auto [k, a] = s.var_rows[t];
            const double before = s.rows[k].penalty(act_[k]);
            act_[k] += sign * a;
            d += s.rows[k].penalty(act_[k]) - before;
        }
        for (std::size_t t = s.var_qrows_start[i]; t < s.var_qrows_start[i + 1]; ++t) {
            const auto [q, slot] = s.var_qrows[t];
            const auto& qr = s.qrows[q];
            const double before = qr.row.penalty(qact_[q]);
            qact_[q] += sign * qfield_[q][slot];
            d += qr.row.penalty(qact_[q]) - before;
            for (const auto& [other, b] : qr.adj[slot]) qfield_[q][other] += sign * b;
        }
        for (std::size_t t = s.adj_start[i]; t < s.adj_start[i + 1]; ++t) {
            const auto [j, b] = s.adj[t];
            field_[j] += sign * b;
        }
        x_[i] ^= 1;
        xfull_[s.model_var[i]] = x_[i];
        if (s.coupled[i]) {
            const double p = profile_current();
            d += p - profile_;
            profile_ = p;
        }
        energy_ += d;
    }

    void reset(std::span<const std::uint8_t> x) {
        const Structure& s = *s_;
        if (x.size() != s.nb) throw ValidationError("state does not match the landscape size");
        x_.assign(x.begin(), x.end());
        for (std::size_t i = 0; i < s.nb; ++i) xfull_[s.model_var[i]] = x_[i];
        field_ = s.obj_linear;
        for (std::size_t i = 0; i < s.nb; ++i) {
            if (!x_[i]) continue;
            for (std::size_t t = s.adj_start[i]; t < s.adj_start[i + 1]; ++t) field_[s.adj[t].first] += s.adj[t].second;
        }
        act_.resize(s.rows.size());
        for (std::size_t k = 0; k < s.rows.size(); ++k) act_[k] = s.rows[k].activity(x_);
        qact_.resize(s.qrows.size());
        qfield_.resize(s.qrows.size());
        for (std::size_t q = 0; q < s.qrows.size(); ++q) {
            const auto& qr = s.qrows[q];
            qfield_[q] = qr.lin;
            for (std::size_t a = 0; a < qr.vars.size(); ++a) {
                if (!x_[qr.vars[a]]) continue;
                for (const auto& [b, c] : qr.adj[a]) qfield_[q][b] += c;
            }
            qact_[q] = qr.activity(x_);
        }
        profile_ = profile_current();
        energy_ = recompute_energy();
    }

    double recompute_energy() const {
        const Structure& s = *s_;
        double e = s.obj_offset;
        for (std::size_t i = 0; i < s.nb; ++i) {
            if (!x_[i]) continue;
            e += s.obj_linear[i];
            for (std::size_t t = s.adj_start[i]; t < s.adj_start[i + 1]; ++t) {
                if (s.adj[t].first > i && x_[s.adj[t].first]) e += s.adj[t].second;
            }
        }
        for (const auto& r : s.rows) e += r.penalty(r.activity(x_));
        for (const auto& qr : s.qrows) e += qr.row.penalty(qr.activity(x_));
        return e + profile_current();
    }

    // -- model view ---------------------------------------------------------

    const ConstrainedModel& model() const { return s_->model; }
    bool has_continuous() const { return !s_->cont.empty(); }
    /// model index of landscape variable i
    std::size_t model_index(std::size_t i) const { return s_->model_var[i]; }
    const LambdaReport& report() const { return s_->report; }

    /// Model assignment of the current state, continuous variables at their
    /// profile optimum.
    std::vector<double> model_values() const {
        std::vector<double> x = xfull_;
        if (has_continuous()) s_->cont.optimize(x, s_->cont_weight);
        return x;
    }

    /// Sub-QUBO over `free` (landscape indices) with the rest clamped. Rows
    /// that are quadratic or have non-integral inequality data are left out;
    /// callers must judge the result on the full landscape.
    SubQubo sub_qubo(std::span<const std::size_t> free) const {
        const Structure& s = *s_;
        if (has_continuous()) throw ValidationError("sub-QUBO extraction needs a model without continuous variables");
        SubQubo out;
        out.free.assign(free.begin(), free.end());
        std::vector<std::int64_t> pos(s.nb, -1);
        for (std::size_t a = 0; a < free.size(); ++a) pos[free[a]] = static_cast<std::int64_t>(a);

        // clamped part of the objective: energy with the free bits cleared
        bit_vector base = x_;
        for (std::size_t i : free) base[i] = 0;
        double clamp = s.obj_offset;
        for (std::size_t i = 0; i < s.nb; ++i) {
            if (!base[i]) continue;
            clamp += s.obj_linear[i];
            for (std::size_t t = s.adj_start[i]; t < s.adj_start[i + 1]; ++t) {
                if (s.adj[t].first > i && base[s.adj[t].first]) clamp += s.adj[t].second;
            }
        }

        struct Penalty {
            std::vector<std::pair<index_type, double>> terms;
            double constant;
            double lambda;
            std::vector<std::int64_t> slack;  // signed weights
        };
        std::vector<Penalty> penalties;
        std::vector<std::uint8_t> touched(s.rows.size(), 0);
        std::size_t nslack = 0;
        for (std::size_t i : free) {
            for (std::size_t t = s.var_rows_start[i]; t < s.var_rows_start[i + 1]; ++t) touched[s.var_rows[t].first] = 1;
        }
        for (std::size_t k = 0; k < s.rows.size(); ++k) {
            const auto& r = s.rows[k];
            if (!touched[k]) {
                clamp += r.penalty(act_[k]);
                continue;
            }
            if (!r.integral && r.sense != Sense::EQ) continue;
            Penalty p{{}, r.offset - r.rhs, r.lambda, {}};
            double lo = 0, hi = 0;
            for (const auto& [v, a] : r.terms) {
                if (pos[v] >= 0) {
                    p.terms.emplace_back(static_cast<index_type>(pos[v]), a);
                    lo += std::min(0.0, a);
                    hi += std::max(0.0, a);
                } else if (x_[v]) {
                    p.constant += a;
                }
            }
            if (r.sense != Sense::EQ) {
                // activity - rhs ranges over [constant + lo, constant + hi]
                const double range = r.sense == Sense::LE ? -(p.constant + lo) : p.constant + hi;
                if (range > 0) {
                    for (auto w : slack_weights(static_cast<std::int64_t>(std::llround(range)))) {
                        p.slack.push_back(r.sense == Sense::LE ? w : -w);
                    }
                }
                nslack += p.slack.size();
            }
            penalties.push_back(std::move(p));
        }

        out.num_slack = nslack;
        out.qubo = QuboModel(free.size() + nslack);
        QuboModel& q = out.qubo;
        for (std::size_t a = 0; a < free.size(); ++a) {
            const std::size_t i = free[a];
            double lin = s.obj_linear[i];
            for (std::size_t t = s.adj_start[i]; t < s.adj_start[i + 1]; ++t) {
                const auto [j, b] = s.adj[t];
                if (pos[j] < 0) {
                    if (x_[j]) lin += b;
                } else if (j > i) {
                    q.add_quadratic(a, static_cast<std::size_t>(pos[j]), b);
                }
            }
            q.add_linear(a, lin);
        }
        std::size_t next = free.size();
        for (auto& p : penalties) {
            for (auto w : p.slack) p.terms.emplace_back(static_cast<index_type>(next++), static_cast<double>(w));
            detail::add_squared_penalty(q, std::move(p.terms), p.constant, p.lambda);
        }
        out.clamp_offset = clamp;
        return out;
    }

 private:
    struct Row {
        std::vector<std::pair<index_type, double>> terms;  // landscape index, coefficient
        double offset = 0;
        Sense sense = Sense::EQ;
        double rhs = 0;
        double lambda = 1;
        bool integral = true;

        double penalty(double activity) const {
            const double v = violation(sense, activity, rhs);
            if (v == 0) return 0.0;
            return integral ? lambda * v * v : lambda * (v + v * v);
        }

        double activity(std::span<const std::uint8_t> x) const {
            double a = offset;
            for (const auto& [v, c] : terms) {
                if (x[v]) a += c;
            }
            return a;
        }
    };

    struct QRow {
        Row row;
        std::vector<index_type> vars;                                   // slot -> landscape index
        std::vector<double> lin;                                        // per slot
        std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // per slot

        double activity(std::span<const std::uint8_t> x) const {
            double a = row.offset;
            for (std::size_t t = 0; t < vars.size(); ++t) {
                if (!x[vars[t]]) continue;
                a += lin[t];
                for (const auto& [u, b] : adj[t]) {
                    if (u > t && x[vars[u]]) a += b;
                }
            }
            return a;
        }
    };

    struct Structure {
        ConstrainedModel model;
        ContinuousPart cont;
        std::size_t nb = 0;
        std::vector<std::size_t> model_var;
        std::vector<std::int64_t> bin_index;

        std::vector<double> obj_linear;
        double obj_offset = 0;
        std::vector<std::size_t> adj_start;
        std::vector<std::pair<index_type, double>> adj;

        std::vector<Row> rows;
        std::vector<std::size_t> var_rows_start;
        std::vector<std::pair<std::size_t, double>> var_rows;
        std::vector<QRow> qrows;
        std::vector<std::size_t> var_qrows_start;
        std::vector<std::pair<std::size_t, std::size_t>> var_qrows;

        // continuous profile
        std::vector<std::uint8_t> coupled;
        std::vector<std::size_t> coupled_list;
        IndexedExpr cont_objective;
        double cont_weight = 0;
        LambdaReport report;

        Structure(const ConstrainedModel& m, const PenaltyConfig& cfg) : model(m) {
            cont = ContinuousPart(model);
            for (std::size_t i = 0; i < model.num_variables(); ++i) {
                if (model.variable(i).vartype == Vartype::INTEGER) {
                    throw MustBinarizeError("variable '" + model.variable(i).id +
                                            "' is integer; binarize before building a penalty landscape");
                }
            }
            for (const auto& [label, lam] : cfg.lambdas) {
                if (!(lam > 0)) throw ValidationError("penalty multiplier for '" + label + "' must be positive");
            }
            bin_index.assign(model.num_variables(), -1);
            for (std::size_t i = 0; i < model.num_variables(); ++i) {
                if (model.variable(i).vartype == Vartype::BINARY) {
                    bin_index[i] = static_cast<std::int64_t>(model_var.size());
                    model_var.push_back(i);
                }
            }
            nb = model_var.size();
            auto bi = [&](std::size_t v) { return static_cast<index_type>(bin_index[v]); };
            auto is_bin = [&](std::size_t v) { return bin_index[v] >= 0; };

            // objective
            const auto& obj = model.indexed_objective();
            obj_linear.assign(nb, 0.0);
            obj_offset = obj.offset;
            std::vector<std::vector<std::pair<index_type, double>>> nbrs(nb);
            for (const auto& [v, b] : obj.linear) {
                if (is_bin(v)) {
                    obj_linear[bi(v)] += b;
                } else {
                    cont_objective.linear.emplace_back(v, b);
                }
            }
            for (const auto& [u, v, b] : obj.quadratic) {
                if (is_bin(u) && is_bin(v)) {
                    nbrs[bi(u)].emplace_back(bi(v), b);
                    nbrs[bi(v)].emplace_back(bi(u), b);
                } else {
                    cont_objective.quadratic.emplace_back(u, v, b);
                }
            }
            adj_start.assign(nb + 1, 0);
            for (std::size_t i = 0; i < nb; ++i) {
                adj_start[i + 1] = adj_start[i] + nbrs[i].size();
                adj.insert(adj.end(), nbrs[i].begin(), nbrs[i].end());
            }

            // multipliers
            const double lam_auto = auto_lambda_bounded(model);
            auto lambda_for = [&](const std::string& label) -> LambdaEntry {
                if (auto it = cfg.lambdas.find(label); it != cfg.lambdas.end()) return {it->second, "user"};
                if (!cfg.auto_lambda) throw ValidationError("no penalty multiplier for constraint '" + label + "'");
                return {lam_auto, "auto"};
            };

            // rows
            std::vector<std::vector<std::pair<std::size_t, double>>> vrows(nb);
            std::vector<std::vector<std::pair<std::size_t, std::size_t>>> vqrows(nb);
            std::vector<std::uint8_t> cont_row(model.num_constraints(), 0);
            for (std::size_t k : cont.rows()) cont_row[k] = 1;
            for (std::size_t k = 0; k < model.num_constraints(); ++k) {
                const Constraint& c = model.constraint(k);
                const LambdaEntry lam = lambda_for(c.label);
                report[c.label] = lam;
                if (cont_row[k]) {
                    cont_weight = std::max(cont_weight, lam.lambda);
                    continue;
                }
                Constraint lin = c;
                if (!c.lhs.is_linear()) {
                    if (auto sur = linear_surrogate(c, model)) lin = std::move(*sur);
                }
                Row row;
                row.sense = lin.sense;
                row.rhs = lin.rhs;
                row.lambda = lam.lambda;
                row.offset = lin.lhs.offset();
                row.integral = is_integral(lin.rhs) && is_integral(lin.lhs.offset());
                for (const auto& [v, b] : lin.lhs.linear()) row.integral = row.integral && is_integral(b);
                for (const auto& [uv, b] : lin.lhs.quadratic()) row.integral = row.integral && is_integral(b);
                if (lin.lhs.is_linear()) {
                    for (const auto& [v, b] : lin.lhs.linear()) {
                        const auto i = bi(model.labels()->at(v));
                        row.terms.emplace_back(i, b);
                        vrows[i].emplace_back(rows.size(), b);
                    }
                    rows.push_back(std::move(row));
                    continue;
                }
                QRow qr;
                std::unordered_map<index_type, std::size_t> slot;
                auto slot_of = [&](index_type i) {
                    auto [it, inserted] = slot.emplace(i, qr.vars.size());
                    if (inserted) {
                        qr.vars.push_back(i);
                        qr.lin.push_back(0.0);
                        qr.adj.emplace_back();
                    }
                    return it->second;
                };
                for (const auto& [v, b] : lin.lhs.linear()) qr.lin[slot_of(bi(model.labels()->at(v)))] += b;
                for (const auto& [uv, b] : lin.lhs.quadratic()) {
                    const auto a = slot_of(bi(model.labels()->at(uv.first)));
                    const auto d = slot_of(bi(model.labels()->at(uv.second)));
                    qr.adj[a].emplace_back(d, b);
                    qr.adj[d].emplace_back(a, b);
                }
                for (std::size_t t = 0; t < qr.vars.size(); ++t) vqrows[qr.vars[t]].emplace_back(qrows.size(), t);
                qr.row = std::move(row);
                qrows.push_back(std::move(qr));
            }
            var_rows_start.assign(nb + 1, 0);
            var_qrows_start.assign(nb + 1, 0);
            for (std::size_t i = 0; i < nb; ++i) {
                var_rows_start[i + 1] = var_rows_start[i] + vrows[i].size();
                var_rows.insert(var_rows.end(), vrows[i].begin(), vrows[i].end());
                var_qrows_start[i + 1] = var_qrows_start[i] + vqrows[i].size();
                var_qrows.insert(var_qrows.end(), vqrows[i].begin(), vqrows[i].end());
            }

            // binaries the continuous profile depends on
            coupled.assign(nb, 0);
            auto mark = [&](std::size_t v) {
                if (is_bin(v)) coupled[bi(v)] = 1;
            };
            for (const auto& [u, v, b] : cont_objective.quadratic) {
                mark(u);
                mark(v);
            }
            for (std::size_t k : cont.rows()) {
                const auto& e = model.indexed_constraint(k);
                for (const auto& [v, b] : e.linear) mark(v);
                for (const auto& [u, v, b] : e.quadratic) {
                    mark(u);
                    mark(v);
                }
            }
            for (std::size_t i = 0; i < nb; ++i) {
                if (coupled[i]) coupled_list.push_back(i);
            }
            if (cont_weight == 0) cont_weight = lam_auto;
        }

        Structure(const Structure&) = delete;
        Structure& operator=(const Structure&) = delete;
    };

    std::string signature() const {
        std::string sig(s_->coupled_list.size(), '0');
        for (std::size_t t = 0; t < sig.size(); ++t) sig[t] = static_cast<char>('0' + x_[s_->coupled_list[t]]);
        return sig;
    }

    double profile_of(const std::string& sig, const std::vector<double>& xfull) const {
        if (auto it = cache_->find(sig); it != cache_->end()) return it->second;
        std::vector<double> x = xfull;
        const double viol = s_->cont.optimize(x, s_->cont_weight);
        const double value = std::isfinite(viol) ? s_->cont_objective.evaluate(x) + s_->cont_weight * viol
                                                 : std::numeric_limits<double>::max() / 4;
        if (cache_->size() > 1'000'000) cache_->clear();
        cache_->emplace(sig, value);
        return value;
    }

    double profile_current() const {
        if (s_->cont.empty()) return 0.0;
        return profile_of(signature(), xfull_);
    }

    double profile_flipped(std::size_t i) const {
        std::string sig = signature();
        const auto it = std::lower_bound(s_->coupled_list.begin(), s_->coupled_list.end(), i);
        sig[static_cast<std::size_t>(it - s_->coupled_list.begin())] ^= 1;  // '0' <-> '1'
        std::vector<double> x = xfull_;
        x[s_->model_var[i]] = 1.0 - x[s_->model_var[i]];
        return profile_of(sig, x);
    }

    std::shared_ptr<const Structure> s_;
    std::shared_ptr<std::unordered_map<std::string, double>> cache_;
    bit_vector x_;
    std::vector<double> xfull_;
    std::vector<double> field_;
    std::vector<double> act_;
    std::vector<double> qact_;
    std::vector<std::vector<double>> qfield_;
    double profile_ = 0;
    double energy_ = 0;
};

/// A landscape restricted to a subset of its variables; the rest stay at
/// the values they had when the view was made.
template <FlipLandscape L>
class SubsetView {
 public:
    SubsetView(L base, std::vector<std::size_t> vars) : base_(std::move(base)), vars_(std::move(vars)) {
        x_.resize(vars_.size());
        for (std::size_t a = 0; a < vars_.size(); ++a) x_[a] = base_.state()[vars_[a]];
    }

    std::size_t size() const { return vars_.size(); }
    double energy() const { return base_.energy(); }
    std::span<const std::uint8_t> state() const { return x_; }
    double delta(std::size_t a) const { return base_.delta(vars_[a]); }
    void flip(std::size_t a) {
        base_.flip(vars_[a]);
        x_[a] ^= 1;
    }
    void reset(std::span<const std::uint8_t> x) {
        bit_vector full(base_.state().begin(), base_.state().end());
        for (std::size_t a = 0; a < vars_.size(); ++a) full[vars_[a]] = x[a];
        base_.reset(full);
        x_.assign(x.begin(), x.end());
    }
    double recompute_energy() const { return base_.recompute_energy(); }

    const L& base() const { return base_; }

 private:
    L base_;
    std::vector<std::size_t> vars_;
    bit_vector x_;
};

}  // namespace hycqm
