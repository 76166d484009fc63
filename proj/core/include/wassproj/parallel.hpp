#pragma once

#include <cstddef>
#include <functional>

namespace wassproj {

/// Number of worker threads used by parallel_for: the WASSPROJ_THREADS
/// environment variable when set (values < 1 clamp to 1), otherwise
/// std::thread::hardware_concurrency().
int max_threads();

/// Runs body(i) for i in [0, n). Work items must be independent; results are
/// identical for any thread count, so outputs stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wassproj
