#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace bsdelab {

// Fixed-size blocks keep reductions deterministic: callers accumulate per block
// and combine in block order, so results are bit-identical for any job count.
inline constexpr int kPathBlock = 2048;

inline int block_count(int items) { return (items + kPathBlock - 1) / kPathBlock; }

// Runs fn(block_index, begin, end) for every block, on up to `jobs` threads.
inline void for_each_block(int items, int jobs,
                           const std::function<void(int, int, int)>& fn) {
    const int blocks = block_count(items);
    if (jobs <= 1 || blocks <= 1) {
        for (int b = 0; b < blocks; ++b)
            fn(b, b * kPathBlock, std::min(items, (b + 1) * kPathBlock));
        return;
    }
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, blocks);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int b = w; b < blocks; b += workers)
                fn(b, b * kPathBlock, std::min(items, (b + 1) * kPathBlock));
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace bsdelab
