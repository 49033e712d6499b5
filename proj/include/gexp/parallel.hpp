#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace gexp {

// Runs fn(begin, end) over a partition of [0, n). Workers write to
// disjoint, pre-assigned index ranges, so the result is identical for
// any job count; `jobs` is purely a throughput hint.
inline void parallel_for_blocks(
    std::int64_t n, int jobs,
    const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    if (jobs <= 1 || n == 1) {
        fn(0, n);
        return;
    }
    const int workers = static_cast<int>(
        std::min<std::int64_t>(jobs, n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t begin = w * chunk;
        const std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace gexp
