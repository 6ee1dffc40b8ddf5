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
#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hycqm {

/// Run body(i) for i in [0, count) on up to `workers` threads. Indices are
/// handed out in order; the first exception is rethrown after all workers
/// stop.
template <class Body>
void parallel_for(std::size_t count, std::size_t workers, Body&& body) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Monotonic deadline; a zero or negative budget never expires.
class Deadline {
 public:
    using clock = std::chrono::steady_clock;

    Deadline() = default;
    explicit Deadline(double seconds) : start_(clock::now()), limited_(seconds > 0) {
        if (limited_) end_ = start_ + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(seconds));
    }

    bool expired() const { return limited_ && clock::now() >= end_; }
    double elapsed() const { return std::chrono::duration<double>(clock::now() - start_).count(); }
    double remaining() const {
        return limited_ ? std::chrono::duration<double>(end_ - clock::now()).count() : 1e300;
    }

 private:
    clock::time_point start_ = clock::now();
    clock::time_point end_{};
    bool limited_ = false;
};

/// Seconds elapsed since construction on the monotonic clock.
class Stopwatch {
 public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

 private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace hycqm
