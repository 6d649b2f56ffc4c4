#pragma once

#include <cstddef>
#include <functional>

namespace circlot {

/// Worker count: CIRCLOT_THREADS if set and > 0, hardware concurrency
/// otherwise (CIRCLOT_THREADS=0 also means auto).
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) over the worker pool. fn must be safe to
/// call concurrently for distinct i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace circlot
