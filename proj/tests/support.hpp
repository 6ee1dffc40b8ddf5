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


// Shared fixtures and independent reference computations for the tests.
// The references here deliberately avoid the library's own enumeration and
// landscape code: they loop over masks and evaluate expressions directly.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hycqm/hycqm.hpp"

namespace hycqm::test {

/// Values of bits of `mask` as doubles, least significant bit first.
inline std::vector<double> mask_values(std::uint64_t mask, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>((mask >> i) & 1);
    return x;
}

inline bit_vector mask_bits(std::uint64_t mask, std::size_t n) {
    bit_vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((mask >> i) & 1);
    return x;
}

/// Direct QUBO energy from the coefficient tables.
inline double qubo_energy(const QuboModel& q, std::span<const std::uint8_t> x) {
    double e = q.offset();
    for (std::size_t i = 0; i < x.size(); ++i) e += q.linear(i) * x[i];
    for (const auto& [uv, b] : q.quadratic()) e += b * x[uv.first] * x[uv.second];
    return e;
}

inline double ising_energy(const IsingModel& m, std::span<const double> s) {
    double e = m.offset();
    for (std::size_t i = 0; i < s.size(); ++i) e += m.linear(i) * s[i];
    for (const auto& [uv, b] : m.quadratic()) e += b * s[uv.first] * s[uv.second];
    return e;
}

/// Random QUBO with integer-valued coefficients in [-range, range] and
/// density `p` of couplings.
inline QuboModel random_qubo(std::size_t n, std::mt19937_64& gen, int range = 5, double p = 0.6) {
    std::uniform_int_distribution<int> coef(-range, range);
    std::bernoulli_distribution keep(p);
    QuboModel q(n);
    for (std::size_t i = 0; i < n; ++i) q.set_linear(i, coef(gen));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (keep(gen)) q.add_quadratic(i, j, coef(gen));
        }
    }
    q.add_offset(coef(gen));
    return q;
}

/// Random Ising model with real couplings in [-1, 1].
inline IsingModel random_glass(std::size_t n, std::mt19937_64& gen, double p = 0.5) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::bernoulli_distribution keep(p);
    IsingModel m(n);
    for (std::size_t i = 0; i < n; ++i) m.set_linear(i, coef(gen) * 0.5);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (keep(gen)) m.add_quadratic(i, j, coef(gen));
        }
    }
    return m;
}

/// Exact minimum of a QUBO by mask loop.
inline double qubo_min(const QuboModel& q) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = q.num_variables();
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        best = std::min(best, qubo_energy(q, mask_bits(mask, n)));
    }
    return best;
}

inline double ising_min(const IsingModel& m) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = m.num_variables();
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? 1.0 : -1.0;
        best = std::min(best, ising_energy(m, s));
    }
    return best;
}

/// Feasible optimum of an all-binary constrained model by mask loop, using
/// evaluate() on name maps and a hand-written sense check.
inline std::optional<double> constrained_min(const ConstrainedModel& m) {
    const std::size_t n = m.num_variables();
    std::optional<double> best;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        std::map<std::string, double> a;
        for (std::size_t i = 0; i < n; ++i) a[m.variable(i).id] = static_cast<double>((mask >> i) & 1);
        bool ok = true;
        for (const auto& c : m.constraints()) {
            const double lhs = evaluate(c.lhs, a);
            if (c.sense == Sense::EQ) ok = ok && std::abs(lhs - c.rhs) <= 1e-9;
            if (c.sense == Sense::LE) ok = ok && lhs <= c.rhs + 1e-9;
            if (c.sense == Sense::GE) ok = ok && lhs >= c.rhs - 1e-9;
        }
        if (!ok) continue;
        const double e = evaluate(m.objective(), a);
        if (!best || e < *best) best = e;
    }
    return best;
}

/// Random small binary linear program: integer objective and 1-3 integer
/// constraints of random sense.
inline ConstrainedModel random_blp(std::size_t n, std::mt19937_64& gen) {
    std::uniform_int_distribution<int> coef(-6, 6);
    std::uniform_int_distribution<int> pos(0, 3);
    std::uniform_int_distribution<int> sense(0, 2);
    std::uniform_int_distribution<int> count(1, 3);
    ModelBuilder b;
    QuadraticExpr obj;
    for (std::size_t i = 0; i < n; ++i) {
        b.add_binary("x" + std::to_string(i));
        obj.add_linear("x" + std::to_string(i), coef(gen));
    }
    b.set_objective(obj);
    const int rows = count(gen);
    for (int r = 0; r < rows; ++r) {
        QuadraticExpr lhs;
        int total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int a = pos(gen);
            if (a) lhs.add_linear("x" + std::to_string(i), a);
            total += a;
        }
        if (lhs.linear().empty()) lhs.add_linear("x0", 1), total = 1;
        std::uniform_int_distribution<int> rhs(1, std::max(1, total - 1));
        b.add_constraint(lhs, static_cast<Sense>(sense(gen)), rhs(gen), "c" + std::to_string(r));
    }
    return b.build();
}

}  // namespace hycqm::test
