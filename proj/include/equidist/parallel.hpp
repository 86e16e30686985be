#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace equidist {

/// Worker count: hardware concurrency, capped by EQUIDIST_THREADS when set.
inline unsigned thread_count() {
  static const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  unsigned n = hardware;
  if (const char* env = std::getenv("EQUIDIST_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// Runs fn(i) for i in [0, n). Each index must write only its own output
/// slot; results are then independent of scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_chunk = 64) {
  const std::size_t workers =
      std::min<std::size_t>(thread_count(), (n + min_chunk - 1) / min_chunk);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise (tree) summation: fixed association order, O(log n) error growth.
template <class T, class Range>
T pairwise_sum(const Range& values, std::size_t begin, std::size_t end) {
  if (end - begin <= 8) {
    T acc{};
    for (std::size_t i = begin; i < end; ++i) acc += values[i];
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum<T>(values, begin, mid) + pairwise_sum<T>(values, mid, end);
}

template <class T, class Range>
T pairwise_sum(const Range& values) {
  return pairwise_sum<T>(values, 0, values.size());
}

}  // namespace equidist
