#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace chemostat {

/// Number of workers to use when the caller passes 0.
inline std::size_t default_workers() {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on a pool of `workers` threads pulling
/// indices from a shared counter. Results must be written by index, so the
/// outcome does not depend on scheduling. The exception of the lowest failing
/// index, if any, is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    if (workers == 0) workers = default_workers();
    workers = std::min(workers, count);
    std::vector<std::exception_ptr> errors(count);
    auto drain = [&](std::atomic<std::size_t>& next) {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    std::atomic<std::size_t> next{0};
    if (workers <= 1) {
        drain(next);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back([&] { drain(next); });
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace chemostat
