#pragma once

#include <cstddef>
#include <functional>

namespace mrcm {

/// Process-wide worker count used by parallel_for. 0 selects the
/// hardware concurrency. Set once at startup (CLI --threads); not
/// synchronized against concurrent parallel_for calls.
void set_worker_count(unsigned n);
unsigned worker_count();

/// Runs fn(i) for i in [0, n). Tasks must write only to their own
/// slots; results are independent of the worker count. Exceptions are
/// captured and the first one is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mrcm
