#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace iic {

/// Work-stealing-free static parallel for: fn(i) for i in [0,count).
/// Callers store results per index, so output stays deterministic for any job
/// count.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= count) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int nt = std::min(jobs, count);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace iic
