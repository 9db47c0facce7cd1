#pragma once

// Sweep fan-out helper: plain index-striped threads, capped by the
// OFFLOAD_OPT_THREADS environment variable. Callers write results into
// pre-sized slots so output order never depends on scheduling.

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace offload::detail {

inline int sweep_threads() {
    if (const char* env = std::getenv("OFFLOAD_OPT_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename Fn>
void parallel_for(size_t count, Fn fn) {
    int threads = std::min<int>(sweep_threads(), static_cast<int>(count));
    if (threads <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t]() {
            for (size_t i = static_cast<size_t>(t); i < count;
                 i += static_cast<size_t>(threads))
                fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace offload::detail
