#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace adacurv {

// Resolves a requested worker count; 0 means "all hardware threads".
inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i, worker) for i in [0, n) on up to `workers` threads, where
// worker < workers identifies the calling thread (for per-thread scratch).
// Work is handed out in fixed-size chunks from a shared counter; body must
// only write to per-index state so results do not depend on the schedule.
// The first exception thrown by any worker is rethrown on the caller.
template <typename Body>
void parallel_for_workers(std::size_t n, unsigned workers, Body&& body, std::size_t chunk = 16) {
    workers = resolve_workers(workers);
    if (workers <= 1 || n <= chunk) {
        for (std::size_t i = 0; i < n; ++i) body(i, 0u);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto run = [&](unsigned worker) {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            const std::size_t end = std::min(n, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i) body(i, worker);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    const unsigned spawned = static_cast<unsigned>(
        std::min<std::size_t>(workers - 1, (n + chunk - 1) / chunk));
    pool.reserve(spawned);
    for (unsigned t = 0; t < spawned; ++t) pool.emplace_back(run, t + 1);
    run(0u);
    pool.clear();  // joins

    if (error) std::rethrow_exception(error);
}

template <typename Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body, std::size_t chunk = 16) {
    parallel_for_workers(n, workers, [&](std::size_t i, unsigned) { body(i); }, chunk);
}

}  // namespace adacurv
