#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace scene3d {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work items must be
// independent; callers keep determinism by writing to index i only and
// aggregating in index order afterwards.
template <typename Fn>
void parallel_for(size_t n, int jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const size_t workers = std::min<size_t>(static_cast<size_t>(jobs), n);
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace scene3d
