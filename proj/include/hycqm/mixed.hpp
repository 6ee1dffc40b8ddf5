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
#include <limits>
#include <vector>

#include "hycqm/lp.hpp"
#include "hycqm/model.hpp"

namespace hycqm {

/// The continuous variables of a mixed model, solved with every discrete
/// variable held fixed. When the objective is linear in the continuous
/// variables this is an LP; otherwise coordinate descent with per-variable
/// projection onto the constraint-implied interval.
class ContinuousPart {
 public:
    ContinuousPart() = default;

    explicit ContinuousPart(const ConstrainedModel& m) : model_(&m), slot_(m.num_variables(), npos) {
        for (std::size_t i = 0; i < m.num_variables(); ++i) {
            if (m.variable(i).vartype == Vartype::CONTINUOUS) {
                slot_[i] = vars_.size();
                vars_.push_back(i);
            }
        }
        if (vars_.empty()) return;
        for (const auto& [u, v, b] : m.indexed_objective().quadratic) {
            if (slot_[u] != npos && slot_[v] != npos) objective_linear_ = false;
        }
        for (std::size_t k = 0; k < m.num_constraints(); ++k) {
            const auto& e = m.indexed_constraint(k);
            bool touches = false;
            for (const auto& [v, _] : e.linear) touches = touches || slot_[v] != npos;
            for (const auto& [u, v, _] : e.quadratic) {
                if (slot_[u] != npos && slot_[v] != npos) {
                    throw UnsupportedEncodingError("constraint '" + m.constraint(k).label +
                                                   "' multiplies two continuous variables");
                }
                touches = touches || slot_[u] != npos || slot_[v] != npos;
            }
            if (touches) rows_.push_back(k);
        }
    }

    bool empty() const { return vars_.empty(); }
    bool objective_linear() const { return objective_linear_; }
    /// model indices of the continuous variables
    const std::vector<std::size_t>& variables() const { return vars_; }
    /// constraints that involve at least one continuous variable
    const std::vector<std::size_t>& rows() const { return rows_; }
    bool is_continuous(std::size_t i) const { return slot_[i] != npos; }

    /// Overwrite the continuous entries of x with the minimizer of
    /// objective + elastic_weight * (total violation of rows()). With an
    /// infinite weight the rows are hard; returns +inf when they cannot be
    /// met. Otherwise returns the total violation left.
    double optimize(std::vector<double>& x, double elastic_weight) const {
        if (vars_.empty()) return 0.0;
        if (objective_linear_) return optimize_lp(x, elastic_weight);
        coordinate_descent(x, 3);
        return violation(x);
    }

    /// Total violation of rows() at x.
    double violation(std::span<const double> x) const {
        double total = 0;
        for (std::size_t k : rows_) {
            const auto& c = model_->constraint(k);
            total += hycqm::violation(c.sense, model_->indexed_constraint(k).evaluate(x), c.rhs);
        }
        return total;
    }

 private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Row k as sum_j a_j p_j + constant, with discrete values substituted.
    void linearize(std::size_t k, std::span<const double> x, std::vector<std::pair<std::size_t, double>>& coeffs,
                   double& constant) const {
        const auto& e = model_->indexed_constraint(k);
        coeffs.clear();
        constant = e.offset;
        for (const auto& [v, b] : e.linear) {
            if (slot_[v] != npos) {
                coeffs.emplace_back(slot_[v], b);
            } else {
                constant += b * x[v];
            }
        }
        for (const auto& [u, v, b] : e.quadratic) {
            if (slot_[u] != npos) {
                coeffs.emplace_back(slot_[u], b * x[v]);
            } else if (slot_[v] != npos) {
                coeffs.emplace_back(slot_[v], b * x[u]);
            } else {
                constant += b * x[u] * x[v];
            }
        }
    }

    /// Objective gradient coefficient of each continuous variable (linear case).
    std::vector<double> linear_costs(std::span<const double> x) const {
        std::vector<double> c(vars_.size(), 0.0);
        const auto& o = model_->indexed_objective();
        for (const auto& [v, b] : o.linear) {
            if (slot_[v] != npos) c[slot_[v]] += b;
        }
        for (const auto& [u, v, b] : o.quadratic) {
            if (slot_[u] != npos) {
                c[slot_[u]] += b * x[v];
            } else if (slot_[v] != npos) {
                c[slot_[v]] += b * x[u];
            }
        }
        return c;
    }

    double optimize_lp(std::vector<double>& x, double elastic_weight) const {
        const bool hard = std::isinf(elastic_weight);
        LpProblem lp;
        lp.cost = linear_costs(x);
        for (std::size_t i : vars_) {
            lp.lower.push_back(model_->variable(i).lower);
            lp.upper.push_back(model_->variable(i).upper);
        }
        std::vector<std::pair<std::size_t, double>> coeffs;
        for (std::size_t k : rows_) {
            double constant = 0;
            linearize(k, x, coeffs, constant);
            const auto& c = model_->constraint(k);
            LpProblem::Row row{coeffs, c.sense, c.rhs - constant};
            if (!hard) {
                // elastic columns; bounded by the largest possible violation
                double reach = std::abs(row.rhs);
                for (const auto& [j, a] : coeffs) {
                    reach += std::abs(a) * std::max(std::abs(lp.lower[j]), std::abs(lp.upper[j]));
                }
                auto add_elastic = [&](double sign) {
                    row.coeffs.emplace_back(lp.cost.size(), sign);
                    lp.cost.push_back(elastic_weight);
                    lp.lower.push_back(0.0);
                    lp.upper.push_back(reach);
                };
                if (c.sense != Sense::LE) add_elastic(1.0);
                if (c.sense != Sense::GE) add_elastic(-1.0);
            }
            lp.rows.push_back(std::move(row));
        }
        LpResult r = solve_lp(lp);
        if (r.status != LpStatus::OPTIMAL) {
            for (std::size_t s = 0; s < vars_.size(); ++s) x[vars_[s]] = model_->variable(vars_[s]).lower;
            return std::numeric_limits<double>::infinity();
        }
        for (std::size_t s = 0; s < vars_.size(); ++s) x[vars_[s]] = r.x[s];
        double v = violation(x);
        if (hard && v > kFeasibilityTolerance) return std::numeric_limits<double>::infinity();
        return v;
    }

    void coordinate_descent(std::vector<double>& x, int passes) const {
        const auto& o = model_->indexed_objective();
        std::vector<std::pair<std::size_t, double>> coeffs;
        for (int pass = 0; pass < passes; ++pass) {
            for (std::size_t s = 0; s < vars_.size(); ++s) {
                const std::size_t j = vars_[s];
                // objective along x_j: a x_j^2 + b x_j + const
                double a = 0, b = 0;
                for (const auto& [v, c] : o.linear) {
                    if (v == j) b += c;
                }
                for (const auto& [u, v, c] : o.quadratic) {
                    if (u == j && v == j) {
                        a += c;
                    } else if (u == j) {
                        b += c * x[v];
                    } else if (v == j) {
                        b += c * x[u];
                    }
                }
                double lo = model_->variable(j).lower, hi = model_->variable(j).upper;
                // intersect with the interval each row allows for x_j
                for (std::size_t k : rows_) {
                    double constant = 0;
                    linearize(k, x, coeffs, constant);
                    double aj = 0;
                    for (const auto& [t, c] : coeffs) {
                        if (t == s) {
                            aj += c;
                        } else {
                            constant += c * x[vars_[t]];
                        }
                    }
                    if (aj == 0) continue;
                    const auto& c = model_->constraint(k);
                    const double bound = (c.rhs - constant) / aj;
                    const bool upper = (c.sense == Sense::LE) == (aj > 0);
                    if (c.sense == Sense::EQ || upper) hi = std::min(hi, bound);
                    if (c.sense == Sense::EQ || !upper) lo = std::max(lo, bound);
                }
                if (lo > hi) {
                    // rows disagree; stay inside the variable bounds
                    lo = hi = std::clamp(0.5 * (lo + hi), model_->variable(j).lower, model_->variable(j).upper);
                }
                double best;
                if (a > 0) {
                    best = std::clamp(-b / (2 * a), lo, hi);
                } else {
                    best = (a * lo * lo + b * lo <= a * hi * hi + b * hi) ? lo : hi;
                }
                x[j] = best;
            }
        }
    }

    const ConstrainedModel* model_ = nullptr;
    std::vector<std::size_t> slot_;
    std::vector<std::size_t> vars_;
    std::vector<std::size_t> rows_;
    bool objective_linear_ = true;
};

}  // namespace hycqm
