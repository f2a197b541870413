#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace klrt {

// Worker count: KLRT_THREADS if set (1 forces serial execution), otherwise
// the hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("KLRT_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

// Runs fn(i) for i in [0, count). Work items must be independent; results
// keyed by index are scheduling-invariant by construction. Nested calls run
// serially on the calling worker.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
  int workers = thread_count();
  if (workers > count) workers = count;
  if (workers <= 1 || detail::inside_parallel_region) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      detail::inside_parallel_region = true;
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace klrt
