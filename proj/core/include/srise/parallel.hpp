#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace srise {

/// Run fn(begin, end) over contiguous chunks of [0, count) on `workers`
/// threads. Chunking depends only on (count, workers), so any per-index
/// output is identical for every worker count.
template <typename Fn>
void parallel_chunks(int workers, std::int64_t count, Fn&& fn) {
    if (count <= 0) return;
    const int n = std::max(1, workers);
    if (n == 1 || count == 1) {
        fn(static_cast<std::int64_t>(0), count);
        return;
    }
    const std::int64_t chunk = (count + n - 1) / n;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (std::int64_t begin = 0; begin < count; begin += chunk) {
        const std::int64_t end = std::min(count, begin + chunk);
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace srise
