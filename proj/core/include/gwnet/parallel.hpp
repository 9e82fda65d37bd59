#pragma once

#include <cstddef>
#include <functional>

namespace gwnet {

/// Worker count from GWNET_WORKERS, else the hardware concurrency (min 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to `workers` threads. Jobs are handed
/// out dynamically. body must not throw.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned workers = worker_count());

}  // namespace gwnet
