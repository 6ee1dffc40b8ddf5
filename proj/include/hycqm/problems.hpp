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
#include <numeric>
#include <string>
#include <vector>

#include "hycqm/model.hpp"
#include "hycqm/random.hpp"
#include "hycqm/solvers.hpp"

namespace hycqm {

// ---------------------------------------------------------------------------
// Binary linear program: min sum mu_i x_i  s.t.  sum x_i = C  (+ extras)
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxBlpExtras = 5;

struct BlpSpec {
    std::size_t N = 0;
    std::size_t C = 0;
    std::uint64_t seed = kDefaultSeed;
    /// number of additional constraints, added in this order:
    ///   ge_C        sum x_i >= C
    ///   even_odd    sum over even i = sum over odd i
    ///   half        sum_{i=1}^{h} x_i <= sum_{i=h}^{N} x_i,  h = floor(N/2)
    ///   every5      sum over i divisible by 5 of x_i = 0
    ///   shifted_mu  sum mu_{i+1} x_i <= sum mu_{i-1} x_i, indices cyclic
    /// with 1-based indices i = 1..N.
    std::size_t extra = 0;

    void validate() const {
        if (C > N) throw ValidationError("BLP needs 0 <= C <= N");
        if (extra > kMaxBlpExtras) throw ValidationError("BLP supports at most 5 extra constraints");
    }
};

/// mu_1..mu_N uniform on (0, 1) from the seeded stream.
inline std::vector<double> blp_weights(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> mu(n);
    for (auto& m : mu) m = rng.uniform_open();
    return mu;
}

/// Variable id of 1-based index i.
inline std::string blp_id(std::size_t i) { return "x" + std::to_string(i); }

namespace detail {

inline QuadraticExpr blp_objective(const std::vector<double>& mu) {
    QuadraticExpr obj;
    for (std::size_t i = 0; i < mu.size(); ++i) obj.add_linear(blp_id(i + 1), mu[i]);
    return obj;
}

inline QuadraticExpr sum_of(std::size_t n) {
    QuadraticExpr e;
    for (std::size_t i = 1; i <= n; ++i) e.add_linear(blp_id(i), 1.0);
    return e;
}

/// Select x_i = 1 for the listed 1-based indices.
inline std::vector<double> indicator(std::size_t n, const std::vector<std::size_t>& ones) {
    std::vector<double> x(n, 0.0);
    for (std::size_t i : ones) x[i - 1] = 1.0;
    return x;
}

/// A feasible point of an extra-constrained BLP, or empty. Tries an even/odd
/// balanced pick with the smallest shifted weights, first from the second
/// half only, then from everywhere; enumerates small instances outright.
inline std::vector<double> blp_witness(const ConstrainedModel& m, const BlpSpec& s, const std::vector<double>& mu) {
    const std::size_t n = s.N;
    if (n <= 20) {
        std::vector<double> x(n);
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
            for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>((mask >> i) & 1);
            if (m.is_feasible(x)) return x;
        }
        return {};
    }
    auto w = [&](std::size_t i) { return mu[i % n] - mu[(i + n - 2) % n]; };  // mu_{i+1} - mu_{i-1}, 1-based i
    const std::size_t h = n / 2;
    for (std::size_t from : {h + 1, std::size_t(1)}) {
        std::vector<std::size_t> even, odd;
        for (std::size_t i = from; i <= n; ++i) {
            if (s.extra >= 4 && i % 5 == 0) continue;
            (i % 2 == 0 ? even : odd).push_back(i);
        }
        auto by_w = [&](std::size_t a, std::size_t b) { return w(a) < w(b); };
        std::sort(even.begin(), even.end(), by_w);
        std::sort(odd.begin(), odd.end(), by_w);
        std::vector<std::size_t> pick;
        if (s.extra >= 2) {
            if (s.C % 2 != 0 || even.size() < s.C / 2 || odd.size() < s.C / 2) continue;
            pick.assign(even.begin(), even.begin() + static_cast<std::ptrdiff_t>(s.C / 2));
            pick.insert(pick.end(), odd.begin(), odd.begin() + static_cast<std::ptrdiff_t>(s.C / 2));
        } else {
            std::vector<std::size_t> all = even;
            all.insert(all.end(), odd.begin(), odd.end());
            std::sort(all.begin(), all.end(), by_w);
            if (all.size() < s.C) continue;
            pick.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(s.C));
        }
        auto x = indicator(n, pick);
        if (m.is_feasible(x)) return x;
    }
    return {};
}

}  // namespace detail

inline ConstrainedModel gen_blp(const BlpSpec& s) {
    s.validate();
    const std::size_t n = s.N;
    const auto mu = blp_weights(n, s.seed);
    ModelBuilder b;
    for (std::size_t i = 1; i <= n; ++i) b.add_binary(blp_id(i));
    b.set_objective(detail::blp_objective(mu));
    b.add_constraint(detail::sum_of(n), Sense::EQ, static_cast<double>(s.C), "card");
    if (s.extra >= 1) b.add_constraint(detail::sum_of(n), Sense::GE, static_cast<double>(s.C), "ge_C");
    if (s.extra >= 2) {
        QuadraticExpr e;
        for (std::size_t i = 1; i <= n; ++i) e.add_linear(blp_id(i), i % 2 == 0 ? 1.0 : -1.0);
        b.add_constraint(std::move(e), Sense::EQ, 0.0, "even_odd");
    }
    if (s.extra >= 3) {
        // x_h sits on both sides and cancels
        const std::size_t h = n / 2;
        QuadraticExpr e;
        for (std::size_t i = 1; i <= n; ++i) {
            if (i < h) e.add_linear(blp_id(i), 1.0);
            if (i > h) e.add_linear(blp_id(i), -1.0);
        }
        b.add_constraint(std::move(e), Sense::LE, 0.0, "half");
    }
    if (s.extra >= 4) {
        QuadraticExpr e;
        for (std::size_t i = 5; i <= n; i += 5) e.add_linear(blp_id(i), 1.0);
        b.add_constraint(std::move(e), Sense::EQ, 0.0, "every5");
    }
    if (s.extra >= 5) {
        QuadraticExpr e;
        for (std::size_t i = 1; i <= n; ++i) e.add_linear(blp_id(i), mu[i % n] - mu[(i + n - 2) % n]);
        b.add_constraint(std::move(e), Sense::LE, 0.0, "shifted_mu");
    }
    b.set_metadata("family", s.extra ? "blp-k" : "blp")
        .set_metadata("N", std::to_string(n))
        .set_metadata("C", std::to_string(s.C))
        .set_metadata("k", std::to_string(s.extra))
        .set_metadata("seed", std::to_string(s.seed))
        .set_metadata("index_base", "1");
    if (s.extra >= 2) b.set_metadata("even_odd", "even and odd refer to the 1-based index");
    if (s.extra >= 3) b.set_metadata("half", "h = floor(N/2); x_h appears on both sides");
    if (s.extra >= 4) b.set_metadata("every5", "indices divisible by 5 (1-based)");
    if (s.extra >= 5) b.set_metadata("shifted_mu", "cyclic: mu_{N+1} = mu_1, mu_0 = mu_N; same mu as the objective");
    ConstrainedModel m = std::move(b).build();
    if (s.extra >= 2 && detail::blp_witness(m, s, mu).empty()) {
        throw InfeasibleSpecError("BLP N=" + std::to_string(n) + " C=" + std::to_string(s.C) + " k=" +
                                  std::to_string(s.extra) + ": no feasible point found");
    }
    return m;
}

/// Optimum of the base BLP: the C smallest weights.
inline double blp_oracle(const BlpSpec& s) {
    s.validate();
    if (s.extra > 0) throw ValidationError("blp_oracle covers only the base model; use brute force with extras");
    auto mu = blp_weights(s.N, s.seed);
    std::sort(mu.begin(), mu.end());
    return std::accumulate(mu.begin(), mu.begin() + static_cast<std::ptrdiff_t>(s.C), 0.0);
}

// ---------------------------------------------------------------------------
// BLP with the quadratic constraint sum_{i,j} x_i x_j >= C
// ---------------------------------------------------------------------------

/// Same weights as gen_blp with this seed. The constraint is stored in
/// canonical form: x_i x_i folds to x_i and each unordered pair carries 2.
inline ConstrainedModel gen_blp_quadratic_constraint(std::size_t N, std::size_t C, std::uint64_t seed = kDefaultSeed) {
    if (C > N * N) throw ValidationError("quadratic-constraint BLP needs 0 <= C <= N^2");
    const auto mu = blp_weights(N, seed);
    ModelBuilder b;
    for (std::size_t i = 1; i <= N; ++i) b.add_binary(blp_id(i));
    b.set_objective(detail::blp_objective(mu));
    QuadraticExpr e;
    for (std::size_t i = 1; i <= N; ++i) {
        for (std::size_t j = 1; j <= N; ++j) e.add_quadratic(blp_id(i), blp_id(j), 1.0);
    }
    b.add_constraint(std::move(e), Sense::GE, static_cast<double>(C), "pairs");
    b.set_metadata("family", "blp-quad")
        .set_metadata("N", std::to_string(N))
        .set_metadata("C", std::to_string(C))
        .set_metadata("seed", std::to_string(seed))
        .set_metadata("index_base", "1");
    return std::move(b).build();
}

/// ceil(sqrt(C)) computed in integers.
inline std::size_t ceil_sqrt(std::size_t c) {
    auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(c)));
    while (r * r > c) --r;
    while (r * r < c) ++r;
    return r;
}

/// (sum x)^2 >= C forces sum x >= ceil(sqrt(C)); the cheapest such set is
/// that many smallest weights.
inline double blp_quadratic_oracle(std::size_t N, std::size_t C, std::uint64_t seed = kDefaultSeed) {
    if (C > N * N) throw ValidationError("quadratic-constraint BLP needs 0 <= C <= N^2");
    auto mu = blp_weights(N, seed);
    std::sort(mu.begin(), mu.end());
    return std::accumulate(mu.begin(), mu.begin() + static_cast<std::ptrdiff_t>(ceil_sqrt(C)), 0.0);
}

// ---------------------------------------------------------------------------
// Binary quadratic program: min sum_{i,j} mu_ij x_i x_j  s.t.  sum x_i = C
// ---------------------------------------------------------------------------

struct BqpSpec {
    std::size_t N = 0;
    std::size_t C = 0;
    std::uint64_t seed = kDefaultSeed;

    void validate() const {
        if (C > N) throw ValidationError("BQP needs 0 <= C <= N");
    }
};

/// mu_ij for all ordered pairs, drawn row-major, uniform on (0, 1).
inline std::vector<double> bqp_weights(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> mu(n * n);
    for (auto& m : mu) m = rng.uniform_open();
    return mu;
}

inline ConstrainedModel gen_bqp(const BqpSpec& s) {
    s.validate();
    const std::size_t n = s.N;
    const auto mu = bqp_weights(n, s.seed);
    ModelBuilder b;
    for (std::size_t i = 1; i <= n; ++i) b.add_binary(blp_id(i));
    QuadraticExpr obj;
    for (std::size_t i = 0; i < n; ++i) {
        obj.add_linear(blp_id(i + 1), mu[i * n + i]);
        for (std::size_t j = i + 1; j < n; ++j) obj.add_quadratic(blp_id(i + 1), blp_id(j + 1), mu[i * n + j] + mu[j * n + i]);
    }
    b.set_objective(std::move(obj));
    b.add_constraint(detail::sum_of(n), Sense::EQ, static_cast<double>(s.C), "card");
    b.set_metadata("family", "bqp")
        .set_metadata("N", std::to_string(n))
        .set_metadata("C", std::to_string(s.C))
        .set_metadata("seed", std::to_string(s.seed))
        .set_metadata("index_base", "1");
    return std::move(b).build();
}

/// Optimum over all C-subsets (N <= 30).
inline double bqp_oracle(const BqpSpec& s) {
    s.validate();
    if (s.N > kMaxSubsetBits) throw SizeLimitError("bqp_oracle enumerates subsets of at most 30 variables");
    const auto mu = bqp_weights(s.N, s.seed);
    const std::size_t n = s.N;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> ones;
    for_each_subset(n, s.C, [&](std::uint64_t mask) {
        ones.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1) ones.push_back(i);
        }
        double e = 0;
        for (std::size_t a : ones) {
            for (std::size_t c : ones) e += mu[a * n + c];
        }
        best = std::min(best, e);
    });
    return best;
}

}  // namespace hycqm
