#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rsot {

/// Runs fn(worker, lo, hi) over a static contiguous partition of [0, n).
/// Worker w always receives the same range for a given (n, workers), so
/// per-worker results are bitwise reproducible; callers merge partials in
/// worker order.
inline void parallel_blocks(std::size_t n, int workers,
                            const std::function<void(int, std::size_t, std::size_t)>& fn) {
  if (workers <= 1 || n < 2) {
    fn(0, 0, n);
    return;
  }
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> threads;
  threads.reserve(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&fn, t, lo, hi] { fn(static_cast<int>(t), lo, hi); });
  }
  for (auto& th : threads) th.join();
}

}  // namespace rsot
