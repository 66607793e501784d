#pragma once

#include <cstddef>
#include <functional>

namespace crofton {

/// Worker count: hardware concurrency, capped by the CROFTON_THREADS
/// environment variable when it holds a positive integer.
unsigned worker_count();

/// Runs task(i) for i in [0, count). Tasks are claimed dynamically by up to
/// worker_count() threads; callers must write results into per-task slots so
/// that the outcome does not depend on the schedule. The first exception
/// thrown by a task is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace crofton
