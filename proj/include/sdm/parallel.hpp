#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace sdm {

/// Chunked parallel loop over [0, n). Results must be written to
/// index-addressed storage so output order never depends on scheduling.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body,
                         int jobs = 0) {
  if (n <= 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  int workers = jobs > 0 ? jobs : (hw ? static_cast<int>(hw) : 1);
  workers = static_cast<int>(std::min<std::int64_t>(workers, n));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::int64_t lo = w * chunk;
    std::int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::int64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace sdm
