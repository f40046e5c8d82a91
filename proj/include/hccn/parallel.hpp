#pragma once

// Minimal fork-join helper. Work items write to their own output slot, so
// results never depend on scheduling. Nested calls run serially on the
// calling worker.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hccn {

namespace detail {
inline thread_local bool in_worker = false;
}

/// Worker count: HCCN_THREADS when set and positive, else hardware concurrency.
inline int default_threads() {
  if (const char* env = std::getenv("HCCN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i) for i in [0, n). threads <= 0 means default_threads(). The
/// first exception thrown by any item is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, Body&& body, int threads = 0) {
  if (threads <= 0) threads = default_threads();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (workers <= 1 || detail::in_worker) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    detail::in_worker = true;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
    detail::in_worker = false;
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  pool.clear();  // joins
  if (error) std::rethrow_exception(error);
}

/// Sums values in index order with pairwise (tree) reduction.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace hccn
