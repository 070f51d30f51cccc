#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace gmnb {

// Runs fn(i) for i in [0, n) on `workers` threads over contiguous blocks.
// Work assignment is a pure function of (n, workers); combined with
// per-index RNG keying this keeps results independent of scheduling.
// The first exception thrown by any worker is rethrown to the caller.
template <typename Fn>
void parallel_for(int n, int workers, Fn&& fn) {
  if (n <= 0) return;
  if (workers <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int w = std::min(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(w);
  std::vector<std::exception_ptr> errors(w);
  for (int wi = 0; wi < w; ++wi) {
    const int lo = static_cast<int>(static_cast<long long>(n) * wi / w);
    const int hi = static_cast<int>(static_cast<long long>(n) * (wi + 1) / w);
    pool.emplace_back([lo, hi, wi, &fn, &errors] {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[wi] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gmnb
