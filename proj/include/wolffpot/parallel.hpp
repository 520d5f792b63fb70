#pragma once

#include "wolffpot/core.hpp"

#include <functional>

namespace wolffpot {

/// Number of worker threads used by grid evaluations. 1 disables threading.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous static blocks,
/// so every index is computed by the same code regardless of thread count.
void parallel_for(Index n, const std::function<void(Index)>& body);

}  // namespace wolffpot
