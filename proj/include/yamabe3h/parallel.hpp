#pragma once

#include <cstddef>
#include <functional>

namespace yamabe3h {

// Worker cap from YAMABE3H_THREADS, else std::thread::hardware_concurrency().
std::size_t worker_threads();

// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
// write into per-index slots and reduce afterwards in index order, so results
// do not depend on the thread count. Runs inline below min_parallel items.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t min_parallel = 64);

}  // namespace yamabe3h
