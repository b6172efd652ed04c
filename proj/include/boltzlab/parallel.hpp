#pragma once

#include <cstddef>
#include <functional>

namespace boltzlab {

// Process-wide worker count used by the node-parallel maps. Results never
// depend on it: every output node is owned by exactly one worker and its
// reduction order is fixed.
void set_worker_count(int n);
int worker_count();

// Splits [0, n) into contiguous chunks and calls fn(begin, end) on each.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace boltzlab
