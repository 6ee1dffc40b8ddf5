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

#include <cstdint>
#include <random>

namespace hycqm {

/// Seed used whenever none is given. Fixed, never time-based.
inline constexpr std::uint64_t kDefaultSeed = 123;

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of stream `stream` under master seed `seed`. Streams are what make a
/// read's result independent of whether reads run serially or concurrently.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Seeded 64-bit generator with portable uniform helpers. The engine is the
/// standard Mersenne twister; the helpers avoid the implementation-defined
/// std distributions so that results agree across standard libraries.
class Rng {
 public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(stream_seed(seed, stream)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        // rejection on the top of the range keeps it unbiased
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

 private:
    std::mt19937_64 engine_;
};

}  // namespace hycqm
