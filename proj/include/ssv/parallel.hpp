#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ssv {

/// Run fn(i) for i in [0, n_tasks) on up to n_threads workers. Tasks are
/// claimed from an atomic counter; callers make results deterministic by
/// writing to per-index slots, so scheduling order never matters. The first
/// exception thrown by any task is rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n_tasks, unsigned n_threads, F&& fn) {
  if (n_tasks == 0) return;
  if (n_threads <= 1 || n_tasks == 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(n_threads, n_tasks));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ssv
