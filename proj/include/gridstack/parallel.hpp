#ifndef GRIDSTACK_PARALLEL_HPP
#define GRIDSTACK_PARALLEL_HPP

#include <functional>

namespace gridstack {

/// Worker count: GRIDSTACK_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
int worker_count();

/// Runs body(k) for k in [begin, end) on up to worker_count() threads using a
/// static partition. Each index is processed exactly once, so results written
/// to per-index slots do not depend on the schedule. Calls made from inside a
/// worker run serially. The first exception thrown by any worker is rethrown
/// on the caller's thread.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

} // namespace gridstack

#endif
