#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace cascata {

// Global worker count for the permutation / Monte-Carlo loops. Every
// parallelized loop assigns work per iteration index with an independent
// sub-seeded RNG, so results are identical for any worker count.

inline std::atomic<int>& worker_count_ref() {
    static std::atomic<int> count{0}; // 0 = decide from hardware
    return count;
}

inline void set_worker_count(int n) { worker_count_ref().store(n); }

inline int effective_worker_count() {
    int n = worker_count_ref().load();
    if (n <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n = hw == 0 ? 1 : static_cast<int>(hw);
        if (n > 16) n = 16;
    }
    return n;
}

// Runs fn(i) for i in [0, n). fn must only touch state owned by index i.
template <typename Fn>
void parallel_for_index(std::size_t n, Fn&& fn) {
    const int workers = effective_worker_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> threads;
    const int spawn = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(workers)));
    threads.reserve(static_cast<std::size_t>(spawn - 1));
    for (int t = 1; t < spawn; ++t) threads.emplace_back(run);
    run();
    for (auto& th : threads) th.join();
}

} // namespace cascata
