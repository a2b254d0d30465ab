#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace logschroed {

/// Process-wide default worker count used when a call passes threads = 0.
void set_default_threads(int n);
int default_threads();

/// Maps 0 to the default (or hardware concurrency) and clamps to >= 1.
int resolve_threads(int requested);

/// Runs f(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to slot i by the callee, so the outcome never depends on
/// scheduling. The exception of the lowest failing index is rethrown.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& f) {
    const int t = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (int k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace logschroed
