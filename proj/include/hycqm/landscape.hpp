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

#include <concepts>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hycqm/model.hpp"

namespace hycqm {

using bit_vector = std::vector<std::uint8_t>;

/// A single-bit-flip search space: a binary state with an energy and
/// per-variable flip deltas. Spin models are viewed through their bits
/// (s = 2b - 1) so the same search cores run on QUBO, Ising and penalized
/// models.
template <class L>
concept FlipLandscape = requires(L& l, const L& cl, std::size_t i, std::span<const std::uint8_t> x) {
    { cl.size() } -> std::convertible_to<std::size_t>;
    { cl.energy() } -> std::convertible_to<double>;
    { cl.delta(i) } -> std::convertible_to<double>;
    { cl.recompute_energy() } -> std::convertible_to<double>;
    { cl.state() } -> std::convertible_to<std::span<const std::uint8_t>>;
    l.flip(i);
    l.reset(x);
};

/// Compressed sparse row neighbour lists of a QuadraticModel.
class Adjacency {
 public:
    Adjacency() = default;

    template <Domain D>
    explicit Adjacency(const QuadraticModel<D>& m) : start_(m.num_variables() + 1, 0) {
        for (const auto& [uv, _] : m.quadratic()) {
            ++start_[uv.first + 1];
            ++start_[uv.second + 1];
        }
        for (std::size_t i = 1; i < start_.size(); ++i) start_[i] += start_[i - 1];
        neighbors_.resize(start_.back());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (const auto& [uv, b] : m.quadratic()) {
            neighbors_[fill[uv.first]++] = {uv.second, b};
            neighbors_[fill[uv.second]++] = {uv.first, b};
        }
    }

    std::size_t size() const { return start_.empty() ? 0 : start_.size() - 1; }

    std::span<const std::pair<index_type, double>> operator[](std::size_t i) const {
        return {neighbors_.data() + start_[i], neighbors_.data() + start_[i + 1]};
    }

 private:
    std::vector<std::size_t> start_;
    std::vector<std::pair<index_type, double>> neighbors_;
};

/// Incremental QUBO energy over x in {0,1}^n.
class QuboLandscape {
 public:
    explicit QuboLandscape(const QuboModel& q)
            : linear_(q.linear()), offset_(q.offset()), adj_(q), x_(q.num_variables(), 0), field_(linear_) {
        energy_ = offset_;
    }

    std::size_t size() const { return x_.size(); }
    double energy() const { return energy_; }
    std::span<const std::uint8_t> state() const { return x_; }

    /// Energy change of flipping bit i.
    double delta(std::size_t i) const { return x_[i] ? -field_[i] : field_[i]; }

    void flip(std::size_t i) {
        energy_ += delta(i);
        const double d = x_[i] ? -1.0 : 1.0;
        x_[i] ^= 1;
        for (const auto& [j, b] : adj_[i]) field_[j] += d * b;
    }

    void reset(std::span<const std::uint8_t> x) {
        x_.assign(x.begin(), x.end());
        field_ = linear_;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            if (!x_[i]) continue;
            for (const auto& [j, b] : adj_[i]) field_[j] += b;
        }
        energy_ = recompute_energy();
    }

    double recompute_energy() const {
        double e = offset_;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            if (!x_[i]) continue;
            e += linear_[i];
            for (const auto& [j, b] : adj_[i]) {
                if (j > i && x_[j]) e += b;
            }
        }
        return e;
    }

 private:
    std::vector<double> linear_;
    double offset_;
    Adjacency adj_;
    bit_vector x_;
    std::vector<double> field_;  // h_i + sum_j Q_ij x_j
    double energy_;
};

/// Incremental Ising energy, state held as bits b with spin s = 2b - 1.
class IsingLandscape {
 public:
    explicit IsingLandscape(const IsingModel& m)
            : h_(m.linear()), offset_(m.offset()), adj_(m), field_(h_.size()) {
        reset(bit_vector(h_.size(), 0));
    }

    std::size_t size() const { return x_.size(); }
    double energy() const { return energy_; }
    std::span<const std::uint8_t> state() const { return x_; }

    double delta(std::size_t i) const { return -2.0 * spin(i) * field_[i]; }

    void flip(std::size_t i) {
        energy_ += delta(i);
        const double ds = -2.0 * spin(i);
        x_[i] ^= 1;
        for (const auto& [j, b] : adj_[i]) field_[j] += ds * b;
    }

    void reset(std::span<const std::uint8_t> x) {
        x_.assign(x.begin(), x.end());
        for (std::size_t i = 0; i < x_.size(); ++i) {
            double f = h_[i];
            for (const auto& [j, b] : adj_[i]) f += b * spin(j);
            field_[i] = f;
        }
        energy_ = recompute_energy();
    }

    double recompute_energy() const {
        double e = offset_;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            e += h_[i] * spin(i);
            for (const auto& [j, b] : adj_[i]) {
                if (j > i) e += b * spin(i) * spin(j);
            }
        }
        return e;
    }

 private:
    double spin(std::size_t i) const { return x_[i] ? 1.0 : -1.0; }

    std::vector<double> h_;
    double offset_;
    Adjacency adj_;
    bit_vector x_;
    std::vector<double> field_;  // h_i + sum_j J_ij s_j
    double energy_ = 0;
};

/// Spins (+/-1) of a bit state.
inline std::vector<double> to_spins(std::span<const std::uint8_t> bits) {
    std::vector<double> s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? 1.0 : -1.0;
    return s;
}

inline std::vector<double> to_values(std::span<const std::uint8_t> bits) {
    return {bits.begin(), bits.end()};
}

}  // namespace hycqm
