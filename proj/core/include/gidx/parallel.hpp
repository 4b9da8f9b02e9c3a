#pragma once

#include <cstddef>
#include <functional>

namespace gidx {

// Worker count: explicit override, else GERBE_INDEX_THREADS, else hardware.
int thread_count();
void set_thread_count(int n);  // n <= 0 restores the default

// Calls body(i) for i in [0, n) on thread_count() workers with static
// contiguous chunks. Bodies must only write to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gidx
