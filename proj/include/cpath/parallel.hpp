#pragma once

#include <cstddef>
#include <functional>

namespace cpath {

/// Resolves a worker count: requested > 0 wins, otherwise the CPATH_THREADS
/// environment variable, otherwise (or when that is 0) hardware concurrency.
int resolve_thread_count(int requested = 0);

/// Runs fn(0..count-1) across up to `threads` workers. Work items must be
/// independent; callers that need deterministic output write results into
/// index-addressed slots. Exceptions are rethrown for the lowest failing
/// index. Nested calls degrade to serial execution.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace cpath
