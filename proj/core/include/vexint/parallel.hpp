#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace vexint {

/// Number of workers: VEXINT_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs fn(i) for i in [0, count) over contiguous chunks; the first exception is rethrown.
/// Results must be written to per-index slots so that reductions stay deterministic.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

namespace detail {
template <class Term>
double pairwise_range(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo <= 32) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_range(lo, mid, term) + pairwise_range(mid, hi, term);
}
}  // namespace detail

/// Tree reduction of term(0) + ... + term(count - 1).
template <class Term>
double pairwise_sum(std::size_t count, const Term& term) {
  if (count == 0) return 0.0;
  return detail::pairwise_range(0, count, term);
}

inline double pairwise_sum(std::span<const double> values) {
  return pairwise_sum(values.size(), [&](std::size_t i) { return values[i]; });
}

}  // namespace vexint
