#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mfl {

/// Number of worker threads used by sharded loops. Defaults to the hardware
/// concurrency; results never depend on it.
unsigned worker_count() noexcept;
void set_worker_count(unsigned workers);

/// Runs task(i) for i in [0, tasks) on the worker pool. Tasks must write to
/// disjoint state.
void parallel_for(std::size_t tasks, const std::function<void(std::size_t)>& task);

/// Fixed shard width for reductions. Partial results are merged in shard
/// order, so a reduction is bit-identical for any worker count.
inline constexpr std::uint64_t kShardSize = std::uint64_t{1} << 16;

/// Reduces body(lo, hi, acc) over [begin, end) split into kShardSize shards.
template <class Acc, class Body>
Acc sharded_reduce(std::uint64_t begin, std::uint64_t end, Body&& body) {
    if (end <= begin) return Acc{};
    const std::uint64_t shards = (end - begin + kShardSize - 1) / kShardSize;
    std::vector<Acc> partial(shards);
    parallel_for(shards, [&](std::size_t s) {
        const std::uint64_t lo = begin + s * kShardSize;
        const std::uint64_t hi = std::min(end, lo + kShardSize);
        body(lo, hi, partial[s]);
    });
    Acc total{};
    for (const Acc& p : partial) total.merge(p);
    return total;
}

}  // namespace mfl
