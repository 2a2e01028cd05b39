#pragma once

#include <cstddef>
#include <functional>

namespace gksl {

// Worker count from GKSL_THREADS (absent or invalid => 1).
std::size_t worker_count();

// Runs fn(i) for i in [0, n), distributing work over worker_count() threads.
// Each fn(i) must write only to its own output slot; callers combine results
// in index order, so the outcome is independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gksl
