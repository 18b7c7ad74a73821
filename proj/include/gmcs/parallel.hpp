#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gmcs {

inline int default_thread_count() {
    if (const char* env = std::getenv("GMC_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Index-parallel loop; tasks pull indices from a shared counter. Callers make
// determinism hold by writing results into per-index slots and seeding per
// index, never per worker.
template <typename Fn>
void parallel_for(long count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(std::min<long>(threads, count));
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace gmcs
