#pragma once

#include <functional>

namespace nosas {

// Thread count from NOSAS_THREADS, else hardware concurrency (at least 1).
int default_threads();

// Calls fn(k) for k in [0, count) on up to `threads` threads (0 = default).
// The first exception thrown by any call is rethrown after all threads join.
void parallel_for(int count, const std::function<void(int)>& fn, int threads = 0);

} // namespace nosas
