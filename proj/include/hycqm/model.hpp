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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hycqm/exceptions.hpp"

namespace hycqm {

using index_type = std::uint32_t;

enum class Vartype { BINARY, INTEGER, CONTINUOUS };

inline std::string_view to_string(Vartype vt) {
    switch (vt) {
        case Vartype::BINARY:
            return "binary";
        case Vartype::INTEGER:
            return "integer";
        case Vartype::CONTINUOUS:
            return "continuous";
    }
    return "?";
}

inline Vartype vartype_from_string(std::string_view s) {
    if (s == "binary") return Vartype::BINARY;
    if (s == "integer") return Vartype::INTEGER;
    if (s == "continuous" || s == "real") return Vartype::CONTINUOUS;
    throw ValidationError("unknown variable type '" + std::string(s) + "'");
}

enum class Sense { EQ, LE, GE };

inline std::string_view to_string(Sense s) {
    switch (s) {
        case Sense::EQ:
            return "eq";
        case Sense::LE:
            return "le";
        case Sense::GE:
            return "ge";
    }
    return "?";
}

inline Sense sense_from_string(std::string_view s) {
    if (s == "eq" || s == "==") return Sense::EQ;
    if (s == "le" || s == "<=") return Sense::LE;
    if (s == "ge" || s == ">=") return Sense::GE;
    throw ValidationError("unknown sense '" + std::string(s) + "'");
}

/// Amount by which `lhs sense rhs` is violated; zero when satisfied.
inline double violation(Sense sense, double lhs, double rhs) {
    switch (sense) {
        case Sense::EQ:
            return std::abs(lhs - rhs);
        case Sense::LE:
            return std::max(0.0, lhs - rhs);
        case Sense::GE:
            return std::max(0.0, rhs - lhs);
    }
    return 0.0;
}

inline bool is_integral(double v) { return std::isfinite(v) && v == std::nearbyint(v); }

struct Variable {
    std::string id;
    Vartype vartype = Vartype::BINARY;
    double lower = 0;
    double upper = 1;

    static Variable binary(std::string id) { return {std::move(id), Vartype::BINARY, 0, 1}; }
    static Variable integer(std::string id, double lo, double hi) {
        return {std::move(id), Vartype::INTEGER, lo, hi};
    }
    static Variable continuous(std::string id, double lo, double hi) {
        return {std::move(id), Vartype::CONTINUOUS, lo, hi};
    }

    bool is_discrete() const { return vartype != Vartype::CONTINUOUS; }

    friend bool operator==(const Variable&, const Variable&) = default;
};

/// Ordered variable labels with O(1) lookup by id.
class Labels {
 public:
    Labels() = default;

    explicit Labels(std::vector<std::string> names) : names_(std::move(names)) {
        index_.reserve(names_.size());
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (!index_.emplace(names_[i], i).second) {
                throw ValidationError("duplicate variable id '" + names_[i] + "'");
            }
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::string& operator[](std::size_t i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<std::size_t> find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t at(std::string_view id) const {
        auto i = find(id);
        if (!i) throw UnknownVariableError(std::string(id));
        return *i;
    }

    friend bool operator==(const Labels& a, const Labels& b) { return a.names_ == b.names_; }

 private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

using LabelsPtr = std::shared_ptr<const Labels>;

inline LabelsPtr make_labels(std::vector<std::string> names) {
    return std::make_shared<const Labels>(std::move(names));
}

/// Dense assignment of values to a labelled variable set.
class Assignment {
 public:
    Assignment() : labels_(std::make_shared<const Labels>()) {}
    Assignment(LabelsPtr labels, std::vector<double> values)
            : labels_(std::move(labels)), values_(std::move(values)) {
        if (values_.size() != labels_->size()) {
            throw ValidationError("assignment size does not match its labels");
        }
    }

    /// Build from a map; every label must be present.
    static Assignment from_map(LabelsPtr labels, const std::map<std::string, double>& values) {
        std::vector<double> v(labels->size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto it = values.find((*labels)[i]);
            if (it == values.end()) throw UnknownVariableError((*labels)[i]);
            v[i] = it->second;
        }
        return {std::move(labels), std::move(v)};
    }

    std::size_t size() const { return values_.size(); }
    const Labels& labels() const { return *labels_; }
    const LabelsPtr& labels_ptr() const { return labels_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double at(std::string_view id) const { return values_[labels_->at(id)]; }

    std::map<std::string, double> to_map() const {
        std::map<std::string, double> out;
        for (std::size_t i = 0; i < values_.size(); ++i) out.emplace((*labels_)[i], values_[i]);
        return out;
    }

    friend bool operator==(const Assignment& a, const Assignment& b) {
        return a.values_ == b.values_ && *a.labels_ == *b.labels_;
    }

 private:
    LabelsPtr labels_;
    std::vector<double> values_;
};

/// offset + sum of linear terms + sum of pairwise products over named
/// variables. Pair keys are stored with the lexicographically smaller id
/// first; repeated insertions accumulate and zero coefficients are erased.
class QuadraticExpr {
 public:
    using pair_type = std::pair<std::string, std::string>;
    using linear_map = std::map<std::string, double, std::less<>>;
    using quadratic_map = std::map<pair_type, double>;

    QuadraticExpr() = default;
    explicit QuadraticExpr(double offset) : offset_(offset) {}

    QuadraticExpr& add_linear(std::string_view v, double bias) {
        if (bias == 0) return *this;
        auto it = linear_.find(v);
        if (it == linear_.end()) {
            linear_.emplace(std::string(v), bias);
        } else if ((it->second += bias) == 0) {
            linear_.erase(it);
        }
        return *this;
    }

    QuadraticExpr& add_quadratic(std::string_view u, std::string_view v, double bias) {
        if (bias == 0) return *this;
        pair_type key = u <= v ? pair_type(u, v) : pair_type(v, u);
        auto [it, inserted] = quadratic_.emplace(std::move(key), bias);
        if (!inserted && (it->second += bias) == 0) quadratic_.erase(it);
        return *this;
    }

    QuadraticExpr& add_offset(double c) {
        offset_ += c;
        return *this;
    }

    QuadraticExpr& set_offset(double c) {
        offset_ = c;
        return *this;
    }

    QuadraticExpr& scale(double alpha) {
        if (alpha == 0) {
            linear_.clear();
            quadratic_.clear();
            offset_ = 0;
            return *this;
        }
        for (auto& [_, b] : linear_) b *= alpha;
        for (auto& [_, b] : quadratic_) b *= alpha;
        offset_ *= alpha;
        return *this;
    }

    QuadraticExpr& operator+=(const QuadraticExpr& other) {
        for (const auto& [v, b] : other.linear_) add_linear(v, b);
        for (const auto& [uv, b] : other.quadratic_) add_quadratic(uv.first, uv.second, b);
        offset_ += other.offset_;
        return *this;
    }

    friend QuadraticExpr operator+(QuadraticExpr a, const QuadraticExpr& b) { return a += b; }
    friend QuadraticExpr operator*(double alpha, QuadraticExpr e) { return e.scale(alpha); }

    const linear_map& linear() const { return linear_; }
    const quadratic_map& quadratic() const { return quadratic_; }
    double offset() const { return offset_; }

    double linear(std::string_view v) const {
        auto it = linear_.find(v);
        return it == linear_.end() ? 0.0 : it->second;
    }

    double quadratic(std::string_view u, std::string_view v) const {
        pair_type key = u <= v ? pair_type(u, v) : pair_type(v, u);
        auto it = quadratic_.find(key);
        return it == quadratic_.end() ? 0.0 : it->second;
    }

    bool is_linear() const { return quadratic_.empty(); }
    bool empty() const { return linear_.empty() && quadratic_.empty() && offset_ == 0; }
    std::size_t num_terms() const { return linear_.size() + quadratic_.size(); }

    std::set<std::string> variables() const {
        std::set<std::string> out;
        for (const auto& [v, _] : linear_) out.insert(v);
        for (const auto& [uv, _] : quadratic_) {
            out.insert(uv.first);
            out.insert(uv.second);
        }
        return out;
    }

    friend bool operator==(const QuadraticExpr&, const QuadraticExpr&) = default;

 private:
    friend class ConstrainedModel;

    linear_map linear_;
    quadratic_map quadratic_;
    double offset_ = 0;
};

namespace detail {

template <class Lookup>
double evaluate_with(const QuadraticExpr& expr, Lookup&& value_of) {
    double total = expr.offset();
    for (const auto& [v, b] : expr.linear()) total += b * value_of(v);
    for (const auto& [uv, b] : expr.quadratic()) total += b * value_of(uv.first) * value_of(uv.second);
    return total;
}

}  // namespace detail

/// Energy of `expr` under a map assignment.
inline double evaluate(const QuadraticExpr& expr, const std::map<std::string, double, std::less<>>& a) {
    return detail::evaluate_with(expr, [&](const std::string& v) {
        auto it = a.find(v);
        if (it == a.end()) throw UnknownVariableError(v);
        return it->second;
    });
}

inline double evaluate(const QuadraticExpr& expr, const std::map<std::string, double>& a) {
    return detail::evaluate_with(expr, [&](const std::string& v) {
        auto it = a.find(v);
        if (it == a.end()) throw UnknownVariableError(v);
        return it->second;
    });
}

inline double evaluate(const QuadraticExpr& expr, const Assignment& a) {
    return detail::evaluate_with(expr, [&](const std::string& v) { return a.at(v); });
}

struct Constraint {
    QuadraticExpr lhs;
    Sense sense = Sense::EQ;
    double rhs = 0;
    std::string label;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Index-resolved form of a QuadraticExpr, used by hot loops.
struct IndexedExpr {
    std::vector<std::pair<index_type, double>> linear;
    /// (u, v, bias) with u <= v; u == v only for non-binary variables
    std::vector<std::tuple<index_type, index_type, double>> quadratic;
    double offset = 0;

    double evaluate(std::span<const double> x) const {
        double total = offset;
        for (const auto& [v, b] : linear) total += b * x[v];
        for (const auto& [u, v, b] : quadratic) total += b * x[u] * x[v];
        return total;
    }

    bool is_linear() const { return quadratic.empty(); }
};

struct FeasibilityResult {
    bool feasible = true;
    /// label -> violation magnitude, only for violated constraints
    std::map<std::string, double> violations;
};

/// Default absolute feasibility tolerance for constraints involving
/// continuous variables or non-integral data.
inline constexpr double kFeasibilityTolerance = 1e-6;

/// Constrained quadratic model: typed variables, a quadratic objective, and
/// sensed constraints. Immutable once constructed; construct with
/// ModelBuilder or directly from parts (which validates and canonicalizes).
class ConstrainedModel {
 public:
    ConstrainedModel() : labels_(std::make_shared<const Labels>()) {}

    ConstrainedModel(std::vector<Variable> variables, QuadraticExpr objective,
                     std::vector<Constraint> constraints,
                     std::map<std::string, std::string> metadata = {})
            : variables_(std::move(variables)),
              objective_(std::move(objective)),
              constraints_(std::move(constraints)),
              metadata_(std::move(metadata)) {
        std::vector<std::string> names;
        names.reserve(variables_.size());
        for (const auto& v : variables_) {
            validate_variable(v);
            names.push_back(v.id);
        }
        labels_ = make_labels(std::move(names));

        canonicalize(objective_, "objective");
        std::set<std::string, std::less<>> seen;
        for (auto& c : constraints_) {
            if (c.label.empty()) throw ValidationError("constraint with empty label");
            if (!seen.insert(c.label).second) {
                throw ValidationError("duplicate constraint label '" + c.label + "'");
            }
            if (!std::isfinite(c.rhs)) throw ValidationError("constraint '" + c.label + "': rhs not finite");
            canonicalize(c.lhs, "constraint '" + c.label + "'");
        }

        indexed_objective_ = index(objective_);
        indexed_constraints_.reserve(constraints_.size());
        tolerances_.reserve(constraints_.size());
        for (const auto& c : constraints_) {
            indexed_constraints_.push_back(index(c.lhs));
            tolerances_.push_back(integral_constraint(c) ? 0.0 : kFeasibilityTolerance);
        }
    }

    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }
    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(std::size_t i) const { return variables_[i]; }
    const Variable& variable(std::string_view id) const { return variables_[labels_->at(id)]; }
    const QuadraticExpr& objective() const { return objective_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const Constraint& constraint(std::size_t k) const { return constraints_[k]; }
    const std::map<std::string, std::string>& metadata() const { return metadata_; }
    const LabelsPtr& labels() const { return labels_; }

    const IndexedExpr& indexed_objective() const { return indexed_objective_; }
    const IndexedExpr& indexed_constraint(std::size_t k) const { return indexed_constraints_[k]; }

    /// Per-constraint default tolerance: exact for integer data on discrete
    /// variables, kFeasibilityTolerance otherwise.
    double default_tolerance(std::size_t k) const { return tolerances_[k]; }

    bool all_binary() const {
        return std::all_of(variables_.begin(), variables_.end(),
                           [](const Variable& v) { return v.vartype == Vartype::BINARY; });
    }

    std::size_t count(Vartype vt) const {
        return std::count_if(variables_.begin(), variables_.end(),
                             [vt](const Variable& v) { return v.vartype == vt; });
    }

    double objective_value(std::span<const double> x) const { return indexed_objective_.evaluate(x); }
    double objective_value(const Assignment& a) const { return objective_value(a.values()); }

    /// Feasibility under the per-constraint default tolerances.
    FeasibilityResult check_feasibility(std::span<const double> x) const {
        return check(x, [this](std::size_t k) { return tolerances_[k]; });
    }

    /// Feasibility under a uniform absolute tolerance.
    FeasibilityResult check_feasibility(std::span<const double> x, double tol) const {
        if (!(tol > 0)) throw ValidationError("feasibility tolerance must be positive");
        return check(x, [tol](std::size_t) { return tol; });
    }

    bool is_feasible(std::span<const double> x) const {
        for (std::size_t k = 0; k < constraints_.size(); ++k) {
            const auto& c = constraints_[k];
            if (violation(c.sense, indexed_constraints_[k].evaluate(x), c.rhs) > tolerances_[k]) return false;
        }
        return true;
    }

    /// Values outside a variable's domain (bounds, integrality).
    bool in_domain(std::span<const double> x) const {
        for (std::size_t i = 0; i < variables_.size(); ++i) {
            const auto& v = variables_[i];
            if (x[i] < v.lower || x[i] > v.upper) return false;
            if (v.is_discrete() && !is_integral(x[i])) return false;
        }
        return true;
    }

    friend bool operator==(const ConstrainedModel& a, const ConstrainedModel& b) {
        return a.variables_ == b.variables_ && a.objective_ == b.objective_ &&
               a.constraints_ == b.constraints_ && a.metadata_ == b.metadata_;
    }

 private:
    static void validate_variable(const Variable& v) {
        if (v.id.empty()) throw ValidationError("variable with empty id");
        if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
            throw ValidationError("variable '" + v.id + "': bounds must be finite");
        }
        if (v.lower > v.upper) throw ValidationError("variable '" + v.id + "': lower > upper");
        if (v.vartype == Vartype::BINARY && (v.lower != 0 || v.upper != 1)) {
            throw ValidationError("variable '" + v.id + "': binary bounds must be [0, 1]");
        }
        if (v.vartype == Vartype::INTEGER && (!is_integral(v.lower) || !is_integral(v.upper))) {
            throw ValidationError("variable '" + v.id + "': integer bounds must be integral");
        }
    }

    // x*x for binary x is x; every id must be declared
    void canonicalize(QuadraticExpr& e, const std::string& where) const {
        for (const auto& [v, _] : e.linear_) require_declared(v, where);
        std::vector<std::pair<std::string, double>> folded;
        for (auto it = e.quadratic_.begin(); it != e.quadratic_.end();) {
            require_declared(it->first.first, where);
            require_declared(it->first.second, where);
            if (it->first.first == it->first.second &&
                variables_[labels_->at(it->first.first)].vartype == Vartype::BINARY) {
                folded.emplace_back(it->first.first, it->second);
                it = e.quadratic_.erase(it);
            } else {
                ++it;
            }
        }
        for (const auto& [v, b] : folded) e.add_linear(v, b);
    }

    void require_declared(const std::string& id, const std::string& where) const {
        if (!labels_->find(id)) {
            throw ValidationError(where + " references undeclared variable '" + id + "'");
        }
    }

    IndexedExpr index(const QuadraticExpr& e) const {
        IndexedExpr out;
        out.offset = e.offset();
        out.linear.reserve(e.linear().size());
        for (const auto& [v, b] : e.linear()) out.linear.emplace_back(labels_->at(v), b);
        out.quadratic.reserve(e.quadratic().size());
        for (const auto& [uv, b] : e.quadratic()) {
            auto u = static_cast<index_type>(labels_->at(uv.first));
            auto v = static_cast<index_type>(labels_->at(uv.second));
            out.quadratic.emplace_back(std::min(u, v), std::max(u, v), b);
        }
        std::sort(out.linear.begin(), out.linear.end());
        std::sort(out.quadratic.begin(), out.quadratic.end());
        return out;
    }

    bool integral_constraint(const Constraint& c) const {
        if (!is_integral(c.rhs) || !is_integral(c.lhs.offset())) return false;
        for (const auto& [v, b] : c.lhs.linear()) {
            if (!is_integral(b) || !variable(v).is_discrete()) return false;
        }
        for (const auto& [uv, b] : c.lhs.quadratic()) {
            if (!is_integral(b) || !variable(uv.first).is_discrete() || !variable(uv.second).is_discrete()) {
                return false;
            }
        }
        return true;
    }

    template <class Tol>
    FeasibilityResult check(std::span<const double> x, Tol&& tol_of) const {
        if (x.size() != variables_.size()) throw ValidationError("assignment size does not match model");
        FeasibilityResult out;
        for (std::size_t k = 0; k < constraints_.size(); ++k) {
            const auto& c = constraints_[k];
            double v = violation(c.sense, indexed_constraints_[k].evaluate(x), c.rhs);
            if (v > tol_of(k)) {
                out.feasible = false;
                out.violations.emplace(c.label, v);
            }
        }
        return out;
    }

    std::vector<Variable> variables_;
    QuadraticExpr objective_;
    std::vector<Constraint> constraints_;
    std::map<std::string, std::string> metadata_;
    LabelsPtr labels_;
    IndexedExpr indexed_objective_;
    std::vector<IndexedExpr> indexed_constraints_;
    std::vector<double> tolerances_;
};

/// Resolve a possibly-partial or differently-ordered assignment against the
/// model's variable order.
inline std::vector<double> resolve(const ConstrainedModel& m, const Assignment& a) {
    if (a.labels_ptr() == m.labels() || a.labels() == *m.labels()) {
        return {a.values().begin(), a.values().end()};
    }
    std::vector<double> x(m.num_variables());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = a.at(m.variable(i).id);
    return x;
}

inline FeasibilityResult check_feasibility(const ConstrainedModel& m, const Assignment& a) {
    return m.check_feasibility(resolve(m, a));
}

inline FeasibilityResult check_feasibility(const ConstrainedModel& m, const Assignment& a, double tol) {
    return m.check_feasibility(resolve(m, a), tol);
}

inline FeasibilityResult check_feasibility(const ConstrainedModel& m, const std::map<std::string, double>& a,
                                           double tol) {
    return check_feasibility(m, Assignment::from_map(m.labels(), a), tol);
}

/// Single-owner accumulator for a ConstrainedModel.
class ModelBuilder {
 public:
    ModelBuilder& add_variable(Variable v) {
        variables_.push_back(std::move(v));
        return *this;
    }
    ModelBuilder& add_binary(std::string id) { return add_variable(Variable::binary(std::move(id))); }
    ModelBuilder& add_integer(std::string id, double lo, double hi) {
        return add_variable(Variable::integer(std::move(id), lo, hi));
    }
    ModelBuilder& add_continuous(std::string id, double lo, double hi) {
        return add_variable(Variable::continuous(std::move(id), lo, hi));
    }

    QuadraticExpr& objective() { return objective_; }
    ModelBuilder& set_objective(QuadraticExpr e) {
        objective_ = std::move(e);
        return *this;
    }

    ModelBuilder& add_constraint(QuadraticExpr lhs, Sense sense, double rhs, std::string label) {
        constraints_.push_back({std::move(lhs), sense, rhs, std::move(label)});
        return *this;
    }

    ModelBuilder& set_metadata(std::string key, std::string value) {
        metadata_[std::move(key)] = std::move(value);
        return *this;
    }

    ConstrainedModel build() && {
        return {std::move(variables_), std::move(objective_), std::move(constraints_), std::move(metadata_)};
    }
    ConstrainedModel build() const& { return {variables_, objective_, constraints_, metadata_}; }

 private:
    std::vector<Variable> variables_;
    QuadraticExpr objective_;
    std::vector<Constraint> constraints_;
    std::map<std::string, std::string> metadata_;
};

/// Value domain of a QuadraticModel's variables.
enum class Domain { BINARY, SPIN };

/// offset + sum_i linear[i] v_i + sum_{i<j} quadratic[(i, j)] v_i v_j over n
/// variables taking values in {0, 1} (BINARY) or {-1, +1} (SPIN).
template <Domain D>
class QuadraticModel {
 public:
    using pair_type = std::pair<index_type, index_type>;
    static constexpr Domain domain = D;

    QuadraticModel() = default;
    explicit QuadraticModel(std::size_t n) : linear_(n, 0.0) {}

    std::size_t num_variables() const { return linear_.size(); }
    std::size_t num_interactions() const { return quadratic_.size(); }

    const std::vector<double>& linear() const { return linear_; }
    double linear(std::size_t i) const { return linear_[i]; }
    const std::map<pair_type, double>& quadratic() const { return quadratic_; }
    double offset() const { return offset_; }

    double quadratic(std::size_t u, std::size_t v) const {
        auto it = quadratic_.find(key(u, v));
        return it == quadratic_.end() ? 0.0 : it->second;
    }

    void add_linear(std::size_t i, double bias) {
        check_index(i);
        linear_[i] += bias;
    }

    void set_linear(std::size_t i, double bias) {
        check_index(i);
        linear_[i] = bias;
    }

    void add_quadratic(std::size_t u, std::size_t v, double bias) {
        check_index(u);
        check_index(v);
        if (u == v) {
            // v*v == v for binary, == 1 for spin
            if constexpr (D == Domain::BINARY) {
                linear_[u] += bias;
            } else {
                offset_ += bias;
            }
            return;
        }
        if (bias == 0) return;
        auto [it, inserted] = quadratic_.emplace(key(u, v), bias);
        if (!inserted && (it->second += bias) == 0) quadratic_.erase(it);
    }

    void add_offset(double c) { offset_ += c; }
    void set_offset(double c) { offset_ = c; }

    template <class Values>
    double energy(const Values& x) const {
        double e = offset_;
        for (std::size_t i = 0; i < linear_.size(); ++i) e += linear_[i] * x[i];
        for (const auto& [uv, b] : quadratic_) e += b * x[uv.first] * x[uv.second];
        return e;
    }

    /// Largest absolute linear or quadratic coefficient.
    double max_abs_bias() const {
        double m = 0;
        for (double b : linear_) m = std::max(m, std::abs(b));
        for (const auto& [_, b] : quadratic_) m = std::max(m, std::abs(b));
        return m;
    }

    friend bool operator==(const QuadraticModel&, const QuadraticModel&) = default;

 private:
    static pair_type key(std::size_t u, std::size_t v) {
        return u < v ? pair_type(u, v) : pair_type(v, u);
    }
    void check_index(std::size_t i) const {
        if (i >= linear_.size()) throw ValidationError("variable index out of range");
    }

    std::vector<double> linear_;
    std::map<pair_type, double> quadratic_;
    double offset_ = 0;
};

using QuboModel = QuadraticModel<Domain::BINARY>;
using IsingModel = QuadraticModel<Domain::SPIN>;

struct Sample {
    Assignment assignment;
    double energy = 0;
    bool feasible = true;
    std::map<std::string, double> violations;
};

namespace detail {

inline bool sample_less(const Sample& a, const Sample& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    auto av = a.assignment.values();
    auto bv = b.assignment.values();
    return std::lexicographical_compare(av.begin(), av.end(), bv.begin(), bv.end());
}

}  // namespace detail

/// Samples sorted ascending by energy (ties: lexicographically smallest
/// assignment first), plus solver metadata.
class SampleSet {
 public:
    SampleSet() : labels_(std::make_shared<const Labels>()) {}

    SampleSet(LabelsPtr labels, std::vector<Sample> samples, std::string solver, double wall_time,
              std::uint64_t seed)
            : labels_(std::move(labels)),
              samples_(std::move(samples)),
              solver_(std::move(solver)),
              wall_time_(wall_time),
              seed_(seed) {
        if (!(wall_time_ >= 0)) throw ValidationError("sampleset wall time must be non-negative");
        std::stable_sort(samples_.begin(), samples_.end(), detail::sample_less);
    }

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    const Sample& first() const { return samples_.front(); }
    auto begin() const { return samples_.begin(); }
    auto end() const { return samples_.end(); }
    const std::vector<Sample>& samples() const { return samples_; }

    const LabelsPtr& labels() const { return labels_; }
    const std::string& solver() const { return solver_; }
    double wall_time() const { return wall_time_; }
    std::uint64_t seed() const { return seed_; }

    std::size_t num_feasible() const {
        return std::count_if(samples_.begin(), samples_.end(), [](const Sample& s) { return s.feasible; });
    }

    void set_wall_time(double t) {
        if (!(t >= 0)) throw ValidationError("sampleset wall time must be non-negative");
        wall_time_ = t;
    }

 private:
    LabelsPtr labels_;
    std::vector<Sample> samples_;
    std::string solver_;
    double wall_time_ = 0;
    std::uint64_t seed_ = 0;
};

/// Default names "x0".."x{n-1}" for index-based models.
inline LabelsPtr index_labels(std::size_t n, std::string_view prefix = "x") {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(prefix) + std::to_string(i));
    return make_labels(std::move(names));
}

}  // namespace hycqm
