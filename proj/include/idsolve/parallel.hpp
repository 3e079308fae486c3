#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace idsolve {

// Runs fn(i) for i in [0, count) across up to `threads` workers. Results must
// be written into pre-sized per-index slots by the caller; the combination
// step stays sequential so output does not depend on the thread count.
inline void parallel_for(long long count, int threads, const std::function<void(long long)>& fn) {
    if (threads <= 0) threads = (int)std::thread::hardware_concurrency();
    if (threads <= 1 || count <= 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    auto worker = [&] {
        while (true) {
            long long i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = (int)std::min<long long>(threads, count);
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace idsolve
