#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace glassdescent {

/// Number of workers to use when the caller asks for 0 ("all cores").
inline std::size_t default_worker_count() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Calls fn(k) for every k in [0, count) on up to `workers` threads. Tasks
/// are handed out dynamically; callers write results into per-task slots and
/// reduce afterwards, so outcomes do not depend on scheduling. The first
/// exception thrown by any task is rethrown after all threads join.
template <typename Fn> void parallel_for(std::size_t count, std::size_t workers, Fn &&fn) {
  if (workers == 0)
    workers = default_worker_count();
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k)
      fn(k);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1, std::memory_order_relaxed);
      if (k >= count || failed.load(std::memory_order_relaxed))
        return;
      try {
        fn(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        failed = true;
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back(work);
  pool.clear();
  if (error)
    std::rethrow_exception(error);
}

} // namespace glassdescent
