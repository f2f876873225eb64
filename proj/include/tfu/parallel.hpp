#pragma once

#include <cstddef>
#include <functional>

namespace tfu {

/// Worker count: TFU_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_budget();

/// Runs body(i) for i in [0, n). Work is split into contiguous blocks, so the
/// output of each index never depends on the thread count. The first
/// exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tfu
