#pragma once

#include <cstddef>
#include <functional>

namespace orlicz {

/// Worker count: ORLICZ_THREADS when set and positive, otherwise the
/// hardware concurrency (at least 1). `set_thread_override` wins over both.
std::size_t worker_count();

/// Forces a worker count for the current process; 0 restores the default.
void set_thread_override(std::size_t n);

/// Runs body(i) for i in [0, n). Work units must write only to their own
/// slot; callers reduce afterwards in index order so results do not depend
/// on the number of workers. The first exception thrown by any unit is
/// rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace orlicz
