#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace hclab {

// Worker count from HCLAB_THREADS (default: hardware concurrency, at least 1).
unsigned worker_count();

// Sums fn(begin, end) over fixed-size chunks of [0, n). Chunk boundaries do
// not depend on the worker count and partial sums are combined in chunk
// order, so the result is bit-identical for any HCLAB_THREADS.
double chunked_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& fn,
                   std::size_t chunk = 1 << 16);

// Runs fn(i) for i in [0, n) across workers; fn must only write to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// splitmix64 step; seed for chain k is split_seed(master, k).
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

}  // namespace hclab
