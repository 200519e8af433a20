#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace histwalk {

// Runs fn(0..n-1) on up to `jobs` threads. Callers own determinism: fn must
// write only to its own index's slot.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    const int threads = std::min(jobs, n);
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace histwalk
