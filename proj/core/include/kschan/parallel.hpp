#pragma once

#include <cstddef>
#include <functional>

namespace kschan {

// Calls fn(shard) for every shard in [0, shards) on up to `workers` threads
// (0 = hardware concurrency). fn must only write shard-local state. The first
// exception thrown by any shard is rethrown after all threads join.
void for_each_shard(std::size_t shards, unsigned workers,
                    const std::function<void(std::size_t)>& fn);

}  // namespace kschan
