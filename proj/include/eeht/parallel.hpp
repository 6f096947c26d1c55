#pragma once

#include <cstddef>
#include <functional>

namespace eeht {

/// Worker cap: EEHT_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs fn(0..n-1) on up to worker_count() threads. Each index is visited
/// exactly once; the first exception thrown by any task is rethrown here
/// after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace eeht
