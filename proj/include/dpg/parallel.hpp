#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace dpg {

// Worker count from DPG_WORKERS, default 1.
int default_workers();

// Calls fn(i) for i in [0, count) on up to `workers` threads. Items are
// independent; callers store results by index so the outcome does not depend
// on scheduling. The first exception thrown by any item is rethrown.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace dpg
