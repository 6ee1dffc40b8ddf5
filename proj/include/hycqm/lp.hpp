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

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "hycqm/model.hpp"

namespace hycqm {

/// min c.x  s.t.  rows, lower <= x <= upper (all bounds finite).
struct LpProblem {
    struct Row {
        std::vector<std::pair<std::size_t, double>> coeffs;
        Sense sense = Sense::EQ;
        double rhs = 0;
    };

    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<Row> rows;

    std::size_t num_variables() const { return cost.size(); }
};

enum class LpStatus { OPTIMAL, INFEASIBLE };

struct LpResult {
    LpStatus status = LpStatus::INFEASIBLE;
    std::vector<double> x;
    double objective = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Dense tableau simplex with Bland's rule. Small problems only: the
/// library uses it for the continuous part of mixed models, which is a
/// handful of dispatch variables per period in the shipped families.
class Tableau {
 public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return a_[r * (n_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, n_); }
    double& obj(std::size_t c) { return at(m_, c); }

    std::vector<std::size_t> basis;

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c <= n_; ++c) at(pr, c) /= p;
        for (std::size_t r = 0; r <= m_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0) continue;
            for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0;
        }
        basis[pr] = pc;
    }

    /// Minimize the objective row over columns [0, active); returns false if
    /// unbounded.
    bool optimize(std::size_t active, double eps) {
        for (std::size_t iter = 0; iter < 50000; ++iter) {
            std::size_t pc = active;
            for (std::size_t c = 0; c < active; ++c) {
                if (obj(c) < -eps) {
                    pc = c;
                    break;
                }
            }
            if (pc == active) return true;
            std::size_t pr = m_;
            double best = 0;
            for (std::size_t r = 0; r < m_; ++r) {
                if (at(r, pc) <= eps) continue;
                const double ratio = rhs(r) / at(r, pc);
                if (pr == m_ || ratio < best - eps || (ratio <= best + eps && basis[r] < basis[pr])) {
                    pr = r;
                    best = ratio;
                }
            }
            if (pr == m_) return false;
            pivot(pr, pc);
        }
        return true;
    }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

 private:
    std::size_t m_, n_;
    std::vector<double> a_;
};

}  // namespace detail

/// Two-phase primal simplex. Variables are shifted to y = x - lower and
/// upper bounds become explicit rows.
inline LpResult solve_lp(const LpProblem& p, double eps = 1e-9) {
    const std::size_t n = p.num_variables();
    LpResult out;
    for (std::size_t j = 0; j < n; ++j) {
        if (p.lower[j] > p.upper[j] + eps) return out;
    }

    struct StdRow {
        std::vector<std::pair<std::size_t, double>> coeffs;
        Sense sense;
        double rhs;
    };
    std::vector<StdRow> rows;
    for (const auto& r : p.rows) {
        double rhs = r.rhs;
        for (const auto& [j, a] : r.coeffs) rhs -= a * p.lower[j];
        rows.push_back({r.coeffs, r.sense, rhs});
    }
    for (std::size_t j = 0; j < n; ++j) rows.push_back({{{j, 1.0}}, Sense::LE, p.upper[j] - p.lower[j]});
    for (auto& r : rows) {
        if (r.rhs < 0) {
            r.rhs = -r.rhs;
            for (auto& [_, a] : r.coeffs) a = -a;
            if (r.sense == Sense::LE) {
                r.sense = Sense::GE;
            } else if (r.sense == Sense::GE) {
                r.sense = Sense::LE;
            }
        }
    }

    // columns: structural | slack/surplus | artificial
    const std::size_t m = rows.size();
    std::size_t num_slack = 0, num_art = 0;
    for (const auto& r : rows) {
        if (r.sense != Sense::EQ) ++num_slack;
        if (r.sense != Sense::LE) ++num_art;
    }
    const std::size_t art0 = n + num_slack;
    detail::Tableau t(m, art0 + num_art);
    t.basis.assign(m, 0);
    std::size_t s = n, a = art0;
    for (std::size_t r = 0; r < m; ++r) {
        for (const auto& [j, c] : rows[r].coeffs) t.at(r, j) += c;
        t.rhs(r) = rows[r].rhs;
        if (rows[r].sense == Sense::LE) {
            t.at(r, s) = 1;
            t.basis[r] = s++;
        } else {
            if (rows[r].sense == Sense::GE) t.at(r, s++) = -1;
            t.at(r, a) = 1;
            t.basis[r] = a++;
        }
    }

    // phase 1: minimize the sum of artificials
    if (num_art > 0) {
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis[r] < art0) continue;
            for (std::size_t c = 0; c <= t.cols(); ++c) {
                if (c < art0 || c == t.cols()) t.obj(c) -= t.at(r, c);
            }
        }
        t.optimize(t.cols(), eps);
        if (-t.obj(t.cols()) > 1e-7) return out;
        // drive remaining artificials out of the basis
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis[r] < art0) continue;
            for (std::size_t c = 0; c < art0; ++c) {
                if (std::abs(t.at(r, c)) > eps) {
                    t.pivot(r, c);
                    break;
                }
            }
        }
    }

    // phase 2 over structural + slack columns
    for (std::size_t c = 0; c <= t.cols(); ++c) t.obj(c) = 0;
    for (std::size_t j = 0; j < n; ++j) t.obj(j) = p.cost[j];
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = t.basis[r];
        if (b >= art0) continue;
        const double f = t.obj(b);
        if (f == 0) continue;
        for (std::size_t c = 0; c <= t.cols(); ++c) t.obj(c) -= f * t.at(r, c);
    }
    // bounded variables cannot make the problem unbounded
    t.optimize(art0, eps);

    out.x.assign(p.lower.begin(), p.lower.end());
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < n) out.x[t.basis[r]] += t.rhs(r);
    }
    for (std::size_t j = 0; j < n; ++j) out.x[j] = std::min(std::max(out.x[j], p.lower[j]), p.upper[j]);
    out.objective = 0;
    for (std::size_t j = 0; j < n; ++j) out.objective += p.cost[j] * out.x[j];
    out.status = LpStatus::OPTIMAL;
    return out;
}

}  // namespace hycqm
