#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scadamp {

// Runs f(i) for i in [0, n) on up to `threads` workers.  Tasks must write
// only to their own output slots; with that discipline results are identical
// for any thread count.  The first exception thrown by a task is rethrown on
// the calling thread after all workers join.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& f) {
  if (n == 0) return;
  std::size_t nworkers = threads < 1 ? 1 : static_cast<std::size_t>(threads);
  if (nworkers > n) nworkers = n;
  if (nworkers == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(nworkers);
  for (std::size_t w = 0; w < nworkers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

inline int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace scadamp
