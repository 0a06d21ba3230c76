#pragma once

#include <cstddef>
#include <functional>

namespace domlab {

/// Number of worker threads for node loops; capped by DOMLAB_THREADS.
unsigned worker_count();

/// Runs body(begin, end) over a partition of [0, count). Falls back to a
/// single call on the calling thread for small ranges.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 4096);

}  // namespace domlab
