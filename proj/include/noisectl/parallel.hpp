#pragma once

#include <cstdint>
#include <functional>

namespace noisectl {

// Process-wide worker count for data-parallel loops. Defaults to 1; the CLI
// sets it from --threads or NOISECTL_THREADS. Results never depend on it.
int thread_count();
void set_thread_count(int n);

// Splits [0, n) into contiguous chunks, one worker per chunk. fn(begin, end)
// must write only to disjoint output ranges; no cross-thread reduction
// happens here, so determinism is preserved by construction.
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn);

}  // namespace noisectl
