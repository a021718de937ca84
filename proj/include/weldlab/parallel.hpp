#pragma once

#include <functional>

namespace weldlab {

// Thread count: explicit override, else WELDLAB_THREADS, else hardware concurrency.
void set_thread_override(int n);
int thread_count();

// Runs fn(i) for i in [0, n); each index is handled by exactly one thread, so callers
// that write into per-index slots and reduce afterwards get order-independent results.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace weldlab
