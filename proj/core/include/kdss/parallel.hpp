#pragma once

#include <cstddef>
#include <functional>

namespace kdss {

/// Worker-thread cap: the KDSS_THREADS environment variable when set to a
/// positive integer, otherwise std::thread::hardware_concurrency().
unsigned effective_threads();

/// Runs fn(begin, end) over contiguous chunks of [0, n) on up to
/// effective_threads() threads. Degenerates to a direct call for small n
/// or a cap of one. fn must be safe to run concurrently on disjoint ranges.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace kdss
