#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace critflow {

/// Environment variable holding the worker count for parallel loops and sweeps.
inline constexpr const char* kWorkersEnv = "CRITFLOW_WORKERS";

/// Worker count from CRITFLOW_WORKERS, else the hardware concurrency (at least 1).
inline int worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, n) on contiguous chunks, one per worker. fn must
/// only write to per-index state so the result does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, int workers = worker_count()) {
  const std::size_t chunks = std::min<std::size_t>(std::max(workers, 1), n);
  if (chunks <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(chunks - 1);
  const std::size_t per = (n + chunks - 1) / chunks;
  for (std::size_t c = 1; c < chunks; ++c) {
    pool.emplace_back([&fn, c, per, n] {
      for (std::size_t i = c * per; i < std::min(n, (c + 1) * per); ++i) fn(i);
    });
  }
  for (std::size_t i = 0; i < std::min(n, per); ++i) fn(i);
}

}  // namespace critflow
