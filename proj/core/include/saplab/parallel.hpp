#pragma once

#include <cstddef>
#include <functional>

namespace saplab {

/// Worker count: SAP_LAB_THREADS if set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
unsigned thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads. Each index is
/// handled exactly once; callers write to per-index slots so the result does
/// not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace saplab
