#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ccrforge::numkernel {

// Worker count from CCR_FORGE_THREADS; 0 or unset means hardware concurrency.
inline int thread_count() {
  int requested = 0;
  if (const char* env = std::getenv("CCR_FORGE_THREADS")) {
    try {
      requested = std::stoi(env);
    } catch (...) {
      requested = 0;
    }
  }
  if (requested <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    requested = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return requested;
}

// Run f(i) for i in [begin, end). Each index writes only its own outputs, so
// the result is independent of the worker count.
template <class F>
void parallel_for(int begin, int end, F&& f) {
  const int total = end - begin;
  if (total <= 0) return;
  const int workers = std::min(thread_count(), total);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const int chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + w * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f]() {
      for (int i = lo; i < hi; ++i) f(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace ccrforge::numkernel
