#pragma once

#include <cstddef>
#include <functional>

namespace evtforge {

/// Resolves a requested thread count: values <= 0 mean hardware concurrency.
int resolve_threads(int requested);

/// Runs task(shard) for every shard in [0, shards) on up to `threads`
/// workers. The first exception thrown by any task is rethrown after all
/// workers join. Results must be combined by the caller in shard order.
void run_sharded(std::size_t shards, int threads, const std::function<void(std::size_t)>& task);

/// Half-open [begin, end) of shard `i` when `n` items are split into
/// `shards` contiguous, nearly equal chunks.
struct ShardRange {
  std::size_t begin;
  std::size_t end;
};
ShardRange shard_range(std::size_t n, std::size_t shards, std::size_t i);

}  // namespace evtforge
