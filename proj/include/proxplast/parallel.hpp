#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace proxplast {

/// Number of worker threads to use for a requested value (0 = all hardware
/// threads).
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Minimum number of indices a worker must receive before spawning pays.
inline constexpr int parallel_grain = 16;

/// Run body(begin, end) over a static contiguous partition of [0, n).
/// Each index is owned by exactly one chunk, so writes to per-index slots
/// are race-free and results do not depend on the thread count. Loops
/// shorter than the grain run inline.
template <typename Body>
void parallel_for(int n, int threads, Body&& body) {
    threads = resolve_threads(threads);
    threads = std::min(threads, (n + parallel_grain - 1) / parallel_grain);
    if (threads <= 1 || n <= 1) {
        if (n > 0) body(0, n);
        return;
    }
    const int chunk = (n + threads - 1) / threads;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const int begin = t * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& w : workers) w.join();
}

} // namespace proxplast
