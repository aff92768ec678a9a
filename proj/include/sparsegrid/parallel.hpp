#pragma once

#include <cstddef>
#include <functional>

namespace sparsegrid {

/// Hardware concurrency, capped by the SPARSEGRID_THREADS environment variable.
unsigned default_thread_count();

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is handed out
/// dynamically; callers write results to per-index slots so the output does
/// not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace sparsegrid
