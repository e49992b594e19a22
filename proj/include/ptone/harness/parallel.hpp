#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

namespace ptone::harness {

/// PTONE_THREADS if set (must be a positive integer), else the OpenMP default.
int worker_count();

/// min(requested, worker_count()) when requested > 0, else worker_count().
int effective_threads(int requested);

/// Evaluates fn(i) for i in [0, count) on up to `threads` workers and returns
/// results in index order. The exception from the lowest failing index is
/// rethrown after all workers finish.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, int threads, F&& fn) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : 1)
  for (long long i = 0; i < n; ++i) {
    try {
      slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& fn) {
  return parallel_map<T>(count, worker_count(), std::forward<F>(fn));
}

}  // namespace ptone::harness
