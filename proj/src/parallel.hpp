// Copyright 2026 The nearone Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NEARONE_SRC_PARALLEL_HPP
#define NEARONE_SRC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nearone::detail {

inline unsigned resolve_threads(unsigned threads)
{
    return threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
}

// Runs f(i) for i < count on up to `threads` threads (0: all cores).
// Callers write results into slot i so the merge order never depends on
// scheduling. The first exception is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f)
{
    const auto n = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                f(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(mu);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace nearone::detail

#endif
