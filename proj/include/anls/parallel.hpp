#pragma once
// Slot-based work fan-out: body(i) fills slot i of a caller-owned array and
// reductions run sequentially over slots afterwards, so results do not depend
// on the worker count.

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace anls {

inline void parallel_for(int n, int n_threads, const std::function<void(int)>& body) {
  if (n_threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  int workers = std::min(n_threads, n);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace anls
