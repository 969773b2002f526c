#pragma once

#include <cstddef>
#include <functional>

namespace vvp {

// Worker count from VVP_THREADS; unset or 0 means hardware concurrency.
int ConfiguredThreadCount();

// Runs fn(i) for i in [0, n) on up to ConfiguredThreadCount() threads. Work is
// partitioned by index, so results written to per-index slots are independent
// of scheduling. The first exception thrown by any task is rethrown.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace vvp
