#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace steinerlab {

/// Worker cap: STEINER_LAB_THREADS when set, hardware concurrency otherwise.
inline int thread_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("STEINER_LAB_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }();
  return cap;
}

/// Run body(i) for i in [begin, end) on up to thread_cap() workers.
/// Tasks must write to disjoint locations; results are then independent of
/// scheduling order.
template <typename Body>
void parallel_for(int begin, int end, const Body& body) {
  const int count = end - begin;
  if (count <= 0) return;
  const int workers = std::min(thread_cap(), count);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + w * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace steinerlab
