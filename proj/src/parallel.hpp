#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qsm::detail {

/// Runs fn(i) for i in [0, count). Work is spread over hardware threads when
/// `allow` is set; callers write results into per-index slots so the outcome
/// never depends on scheduling. Returns true when more than one thread ran.
template <class Fn>
bool parallel_for(int count, bool allow, Fn&& fn) {
  const int threads =
      allow ? std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())) : 1;
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return false;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return true;
}

}  // namespace qsm::detail
