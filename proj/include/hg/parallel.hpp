#pragma once

#include <cstddef>
#include <functional>

namespace hg {

// Worker count: hardware concurrency, capped by the HG_THREADS environment variable.
int worker_count();

// Calls body(begin, end, worker) on disjoint chunks of [0, n). Chunk boundaries depend
// only on n and the worker count; callers must not rely on them for results.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& body);

}  // namespace hg
