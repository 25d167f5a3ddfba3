#ifndef NLREG_PARALLEL_HPP
#define NLREG_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nlreg {

/// Thread cap from NLFIT_THREADS; unset or invalid means 1 (serial).
inline int thread_cap() {
    const char* env = std::getenv("NLFIT_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    if (v < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw > 0 && v > static_cast<int>(hw)) v = static_cast<int>(hw);
    return v;
}

/// Runs body(i) for i in [0, count). With more than one thread the index
/// range is split into contiguous blocks; each body call must write only to
/// its own preallocated slot so results are identical for any thread count.
inline void parallel_for(int count, const std::function<void(int)>& body) {
    int threads = thread_cap();
    if (threads <= 1 || count < 2 * threads) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    int chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        int lo = t * chunk;
        int hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (int i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace nlreg

#endif
