#pragma once

#include <cstddef>
#include <functional>

namespace ccl {

/// Environment variable holding the worker count for parallel sweeps.
inline constexpr const char* kWorkersEnv = "CCL_WORKERS";

/// CCL_WORKERS if set to a positive integer, else hardware concurrency (>= 1).
std::size_t default_workers();

/// Runs body(i) for i in [0, n) on up to `workers` threads.  Each index is
/// visited exactly once; the first exception thrown is rethrown after all
/// workers have joined.  workers <= 1 runs inline.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace ccl
