#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace rdz {

// Static block split of [0, count) across hardware threads. Each block is
// disjoint, so results are identical for any thread count.
inline void parallel_for(int count,
                         const std::function<void(int begin, int end)>& body) {
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int n_threads = std::max(1, std::min(hw, count));
  if (n_threads == 1 || count < 64) {
    body(0, count);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  const int chunk = (count + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(body, begin, end);
  }
  for (auto& w : workers) w.join();
}

}  // namespace rdz
