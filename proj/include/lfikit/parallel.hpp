#pragma once

#include <cstddef>
#include <functional>

namespace lfikit {

// Resolves the worker count: explicit request > LFIKIT_WORKERS env var >
// hardware concurrency. 0 means "not specified".
unsigned resolve_workers(unsigned requested);

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each task must touch
// only its own output slot; with that discipline results are identical for
// every worker count. If any task throws, the exception from the smallest
// task index is rethrown after all threads join.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

} // namespace lfikit
