// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace kakeya::lab {

// Runs fn(0) .. fn(n-1) on at most `threads` workers and returns the
// results in index order, so output never depends on scheduling. The first
// exception (by index) is rethrown after all workers stop.
template <class Fn>
auto run_indexed(std::size_t n, unsigned threads, Fn fn) -> std::vector<decltype(fn(std::size_t{0}))> {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned k = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, threads), n));
    if (k <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(k);
        for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace kakeya::lab
