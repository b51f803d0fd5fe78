#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace kakeya {

// Chunked parallel loop over [0, n). fn(begin, end, chunk_index) runs on a
// worker; chunk boundaries are deterministic (results must not depend on
// execution order, only on chunk index).
template <class Fn>
void parallel_chunks(int64_t n, int threads, Fn&& fn) {
    if (n <= 0) return;
    threads = std::max(1, threads);
    const int64_t nchunks = std::min<int64_t>(threads, n);
    if (nchunks == 1) {
        fn(int64_t{0}, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nchunks));
    const int64_t step = (n + nchunks - 1) / nchunks;
    for (int64_t c = 0; c < nchunks; ++c) {
        const int64_t b = c * step;
        const int64_t e = std::min(n, b + step);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e, c] { fn(b, e, static_cast<int>(c)); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace kakeya
