#pragma once

// Index-parallel loop used by every kernel. The serial path is the reference;
// both write into per-index slots, so results are identical regardless of
// scheduling and any reduction happens afterwards in index order.

#include <cstddef>
#include <exception>
#include <mutex>

namespace isores {

enum class Exec { serial, parallel };

Exec default_exec();
void set_default_exec(Exec exec);
void set_thread_count(int threads);
int thread_count();

template <class Fn>
void for_each_index(std::size_t count, Fn&& fn, Exec exec = default_exec()) {
  if (exec == Exec::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex guard;
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace isores
