#ifndef ROBAVG_PARALLEL_HPP
#define ROBAVG_PARALLEL_HPP

#include <functional>

namespace robavg {

/// Worker count: ROBAVG_THREADS when set (>= 1), else hardware concurrency.
int worker_count();

/// Runs fn(0..n-1) across up to `threads` workers (0 = worker_count()).
/// Each index must write only its own output slot; the first exception is
/// rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0);

}  // namespace robavg

#endif  // ROBAVG_PARALLEL_HPP
