#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace latkern {

/// Worker count for embarrassingly parallel loops; LATKERN_THREADS overrides
/// the hardware default.
inline unsigned worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("LATKERN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            n = static_cast<unsigned>(v);
    }
    if (n == 0)
        n = 1;
    return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

/// Deterministic parallel map: fn(i) runs once per index, each index owns
/// its output slot, so results do not depend on scheduling.
template <typename Fn>
void parallel_indexed(std::size_t jobs, Fn&& fn) {
    const unsigned workers = worker_count(jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs)
                    return;
                fn(i);
            }
        });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace latkern
