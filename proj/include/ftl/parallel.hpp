#ifndef FTL_PARALLEL_HPP
#define FTL_PARALLEL_HPP

// Deterministic data parallelism: a static index partition over std::thread.
// Workers write only to slots addressed by their own indices, so the merged
// result is identical for every thread count, including 1 (which runs inline).

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ftl {

inline unsigned& worker_threads() {
  static unsigned n = 1;
  return n;
}

inline void set_worker_threads(unsigned n) { worker_threads() = n == 0 ? 1 : n; }

// Calls fn(i) for i in [0, n). Work is split into contiguous blocks, one per
// worker; any exception is rethrown on the calling thread after the join.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(worker_threads() == 0 ? 1 : worker_threads(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ftl

#endif
