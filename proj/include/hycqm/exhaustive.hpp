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
#include <string>
#include <vector>

#include "hycqm/exceptions.hpp"
#include "hycqm/landscape.hpp"

namespace hycqm {

/// Largest bit count accepted by exhaustive enumeration.
inline constexpr std::size_t kMaxExhaustiveBits = 24;

struct ExhaustiveResult {
    double min_energy = std::numeric_limits<double>::infinity();
    /// every global minimizer, lexicographically sorted
    std::vector<bit_vector> argmin;
};

/// Enumerate all 2^n states of a landscape in Gray-code order and return
/// the complete set of global minimizers. Energies within
/// rel_tol * max(1, |min|) of the minimum count as ties; the final set is
/// re-checked against exactly recomputed energies.
template <FlipLandscape L>
ExhaustiveResult enumerate_minima(L& land, double rel_tol = 1e-9, std::size_t max_bits = kMaxExhaustiveBits) {
    const std::size_t n = land.size();
    if (n > max_bits) {
        throw SizeLimitError("exhaustive enumeration refuses " + std::to_string(n) + " binary variables (limit " +
                             std::to_string(max_bits) + ")");
    }
    auto tol = [rel_tol](double e) { return rel_tol * std::max(1.0, std::abs(e)); };

    land.reset(bit_vector(n, 0));
    std::vector<bit_vector> candidates{bit_vector(land.state().begin(), land.state().end())};
    double best = land.energy();

    const std::uint64_t total = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        land.flip(static_cast<std::size_t>(std::countr_zero(k)));
        const double e = land.energy();
        if (e < best - tol(best)) {
            best = e;
            candidates.clear();
            candidates.emplace_back(land.state().begin(), land.state().end());
        } else if (e <= best + tol(best)) {
            candidates.emplace_back(land.state().begin(), land.state().end());
        }
    }

    ExhaustiveResult out;
    std::vector<double> exact(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        land.reset(candidates[c]);
        exact[c] = land.recompute_energy();
        out.min_energy = std::min(out.min_energy, exact[c]);
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (exact[c] <= out.min_energy + tol(out.min_energy)) out.argmin.push_back(std::move(candidates[c]));
    }
    std::sort(out.argmin.begin(), out.argmin.end());
    return out;
}

}  // namespace hycqm
