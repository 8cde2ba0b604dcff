#pragma once

#include <cstddef>
#include <functional>

namespace iktsne {

// Process-wide cap on worker threads; 0 restores hardware_concurrency.
void set_max_threads(unsigned count);
unsigned max_threads();

// Runs body(begin, end) over a fixed partition of [0, count). The partition
// depends only on count and the thread cap, and every range writes disjoint
// state, so results are identical for any thread count. Reductions that need
// a total must combine per-index partials in index order afterwards.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace iktsne
