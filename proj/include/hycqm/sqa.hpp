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
#include <string>
#include <vector>

#include "hycqm/solvers.hpp"

namespace hycqm {

struct SchedulePoint {
    double s = 0;
    double A = 0;  // driver (transverse field) weight
    double B = 0;  // problem weight
};

/// Piecewise-linear A(s), B(s) on a strictly increasing grid covering
/// [0, 1], with the driver dominant at s = 0 and the problem at s = 1.
class AnnealSchedule {
 public:
    explicit AnnealSchedule(std::vector<SchedulePoint> points) : points_(std::move(points)) {
        if (points_.size() < 2) throw InvalidScheduleError("a schedule needs at least two points");
        for (std::size_t k = 0; k < points_.size(); ++k) {
            const auto& p = points_[k];
            if (!std::isfinite(p.A) || !std::isfinite(p.B) || p.A < 0 || p.B < 0) {
                throw InvalidScheduleError("schedule point " + std::to_string(k) + ": A and B must be finite and >= 0");
            }
            if (p.s < 0 || p.s > 1) throw InvalidScheduleError("schedule s must lie in [0, 1]");
            if (k > 0 && !(p.s > points_[k - 1].s)) throw InvalidScheduleError("schedule s must strictly increase");
        }
        if (points_.front().s != 0 || points_.back().s != 1) {
            throw InvalidScheduleError("schedule must start at s = 0 and end at s = 1");
        }
        if (!(points_.front().A > points_.front().B) || !(points_.back().A < points_.back().B)) {
            throw InvalidScheduleError("schedule needs A(0) > B(0) and A(1) < B(1)");
        }
    }

    /// A(s) = 1 - s, B(s) = s on `count` evenly spaced points.
    static AnnealSchedule linear(std::size_t count = 64) {
        if (count < 2) throw InvalidScheduleError("a schedule needs at least two points");
        std::vector<SchedulePoint> pts;
        for (std::size_t k = 0; k < count; ++k) {
            const double s = static_cast<double>(k) / static_cast<double>(count - 1);
            pts.push_back({s, 1 - s, s});
        }
        return AnnealSchedule(std::move(pts));
    }

    const std::vector<SchedulePoint>& points() const { return points_; }

    /// Interpolated (A, B) at s.
    std::pair<double, double> at(double s) const {
        s = std::clamp(s, 0.0, 1.0);
        auto it = std::lower_bound(points_.begin(), points_.end(), s,
                                   [](const SchedulePoint& p, double v) { return p.s < v; });
        if (it == points_.begin()) return {it->A, it->B};
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double w = (s - lo.s) / (hi.s - lo.s);
        return {lo.A + w * (hi.A - lo.A), lo.B + w * (hi.B - lo.B)};
    }

 private:
    std::vector<SchedulePoint> points_;
};

/// Coupling between neighbouring Trotter replicas that reproduces a
/// transverse field of strength A/2 at temperature T with P slices:
/// (P T / 2) ln tanh(A / (2 P T)). Always <= 0, i.e. ferromagnetic for an
/// energy of the form J s^k s^(k+1). The argument is floored so that A = 0
/// gives a large finite coupling.
inline double replica_coupling(double A, std::size_t P, double T) {
    const double pt = static_cast<double>(P) * T;
    const double x = std::max(A / (2 * pt), 1e-8);
    return 0.5 * pt * std::log(std::tanh(x));
}

struct SqaSettings {
    std::size_t slices = 20;
    double temperature = 0.05;
    std::size_t sweeps = 1000;
};

/// One path-integral Monte Carlo anneal over P replicas of a landscape.
/// Effective energy: sum_k (B/2) E(x^k) + J sum_k s^k s^(k+1) (periodic in
/// k), sampled at temperature P T. A sweep makes two passes over the
/// variables in index order. The first is a Swendsen-Wang update along the
/// Trotter direction: equal neighbouring replicas are bonded with
/// probability 1 - exp(2 J / (P T)) and each bonded segment is flipped by a
/// heat-bath test on its problem energy change (a ring with no broken bond
/// is flipped by a Metropolis test instead). The second pass proposes
/// flipping the variable in every replica at once. s advances linearly
/// with the sweep index. Returns the best single replica seen at a sweep
/// boundary.
template <FlipLandscape L>
ReadResult sqa_read(const L& prototype, const AnnealSchedule& schedule, const SqaSettings& cfg, Rng& rng,
                    const Deadline& deadline = {}) {
    const std::size_t n = prototype.size();
    const std::size_t P = cfg.slices;
    const double beta = 1.0 / (static_cast<double>(P) * cfg.temperature);
    std::vector<L> rep(P, prototype);
    for (auto& r : rep) detail::randomize(r, rng);

    ReadResult best;
    auto record = [&] {
        for (const auto& r : rep) {
            if (r.energy() < best.energy) {
                best.energy = r.energy();
                best.state.assign(r.state().begin(), r.state().end());
            }
        }
    };
    record();

    std::vector<double> de(P);
    std::vector<std::uint8_t> bond(P);  // bond[k] joins replica k and k + 1
    for (std::size_t sweep = 0; sweep < cfg.sweeps; ++sweep) {
        const double s = cfg.sweeps > 1 ? static_cast<double>(sweep) / static_cast<double>(cfg.sweeps - 1) : 1.0;
        const auto [A, B] = schedule.at(s);
        const double p_bond = 1.0 - std::exp(2.0 * replica_coupling(A, P, cfg.temperature) * beta);
        const double half_b = 0.5 * B;

        for (std::size_t i = 0; i < n; ++i) {
            std::size_t first_break = P;
            for (std::size_t k = 0; k < P; ++k) {
                de[k] = rep[k].delta(i);
                const std::size_t up = (k + 1) % P;
                bond[k] = rep[k].state()[i] == rep[up].state()[i] && rng.uniform() < p_bond;
                if (!bond[k] && first_break == P) first_break = k;
            }
            if (first_break == P) {
                double dh = 0;
                for (std::size_t k = 0; k < P; ++k) dh += de[k];
                dh *= half_b;
                if (dh <= 0 || rng.uniform() < std::exp(-dh * beta)) {
                    for (auto& r : rep) r.flip(i);
                }
                continue;
            }
            // heat bath per segment: with Metropolis, two segments with zero
            // field would swap every sweep and pin an imaginary-time kink
            auto try_flip = [&](std::size_t from, std::size_t len) {
                double dh = 0;
                for (std::size_t t = 0; t < len; ++t) dh += de[(from + t) % P];
                dh *= half_b;
                if (rng.uniform() * (1.0 + std::exp(dh * beta)) < 1.0) {
                    for (std::size_t t = 0; t < len; ++t) rep[(from + t) % P].flip(i);
                }
            };
            // segments start right after a broken bond
            std::size_t start = (first_break + 1) % P, len = 0;
            for (std::size_t t = 0; t < P; ++t) {
                const std::size_t k = (start + t) % P;
                ++len;
                if (!bond[k]) {
                    try_flip((k + P + 1 - len) % P, len);
                    len = 0;
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double dh = 0;
            for (const auto& r : rep) dh += r.delta(i);
            dh *= half_b;
            if (dh <= 0 || rng.uniform() < std::exp(-dh * beta)) {
                for (auto& r : rep) r.flip(i);
            }
        }
        if ((sweep & 63) == 63) {
            for (auto& r : rep) detail::resync(r);
        }
        record();
        if ((sweep & 15) == 15 && deadline.expired()) break;
    }
    L out = prototype;
    out.reset(best.state);
    best.energy = out.recompute_energy();
    return best;
}

template <FlipLandscape L>
std::vector<ReadResult> sqa_reads(const L& prototype, const AnnealSchedule& schedule, const SolverParams& p) {
    p.validate();
    const SqaSettings cfg{p.trotter_slices, p.sqa_temperature, p.sweeps};
    const Deadline deadline(p.time_limit);
    std::vector<ReadResult> out(p.reads);
    parallel_for(p.reads, p.threads, [&](std::size_t r) {
        Rng rng(p.seed, r);
        out[r] = sqa_read(prototype, schedule, cfg, rng, deadline);
    });
    return out;
}

inline SampleSet simulated_quantum_annealing(const IsingModel& m, const AnnealSchedule& schedule,
                                             const SolverParams& p = {}, LabelsPtr labels = nullptr) {
    Stopwatch clock;
    labels = detail::labels_or_default(std::move(labels), m.num_variables());
    std::vector<Sample> samples;
    for (const auto& r : sqa_reads(IsingLandscape(m), schedule, p)) {
        samples.push_back(detail::spin_sample(m, labels, r.state));
    }
    return {labels, std::move(samples), "sqa", clock.seconds(), p.seed};
}

inline SampleSet simulated_quantum_annealing(const IsingModel& m, const SolverParams& p = {},
                                             LabelsPtr labels = nullptr) {
    return simulated_quantum_annealing(m, AnnealSchedule::linear(), p, std::move(labels));
}

}  // namespace hycqm
