#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace p2dyn {

/// Global worker-pool size. 0 means hardware concurrency.
/// Overridable with the P2DYN_WORKERS environment variable.
inline int& worker_count() {
    static int n = [] {
        if (const char* env = std::getenv("P2DYN_WORKERS")) {
            int v = std::atoi(env);
            if (v > 0) return v;
        }
        return 0;
    }();
    return n;
}

inline int effective_workers() {
    int n = worker_count();
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

/// Runs fn(i) for i in [0, n). Static block partition; fn must only write to
/// per-index slots so the result is independent of the schedule.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
    const int workers = effective_workers();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t blocks = static_cast<std::size_t>(workers);
    std::vector<std::thread> pool;
    pool.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = n * b / blocks;
        const std::size_t hi = n * (b + 1) / blocks;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Pairwise (tree) summation in a fixed order; bit-stable for a fixed input
/// length regardless of worker count.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
    return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace p2dyn
