#pragma once

#include <cstddef>
#include <functional>

namespace smoothlab {

/// Runs fn(i) for i = 0..count-1 on up to `threads` workers (0 means the
/// hardware concurrency). Workers pull indices from a shared counter, so callers
/// that store results by index get output independent of the schedule. The
/// first exception thrown by fn is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace smoothlab
