#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace mbp {

/// Runs fn(i) for i in [0, count) on `workers` threads. Work is claimed from
/// a shared counter; callers keep results in preallocated slots so the output
/// is independent of scheduling. fn must not throw (wrap and record errors).
template <typename Fn>
void parallel_for(int workers, std::size_t count, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> threads;
  int n = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  threads.reserve(n);
  for (int t = 0; t < n; ++t) threads.emplace_back(body);
  for (auto& t : threads) t.join();
}

}  // namespace mbp
