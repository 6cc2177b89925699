#pragma once

#include <cstddef>
#include <functional>

namespace sigmalab {

/// Worker count: SIGMALAB_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Calls body(i) for i in [0, n), split into contiguous chunks across threads.
/// Each index is visited exactly once; results written per-index are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sigmalab
