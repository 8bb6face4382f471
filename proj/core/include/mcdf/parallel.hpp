#pragma once

// Minimal fork-join helper. Each task writes only its own output slot, so
// results do not depend on the thread count.

#include <cstddef>
#include <functional>

namespace mcdf {

/// Worker count used by parallel_for; 1 (the default) runs inline.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, count), split into contiguous chunks.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mcdf
