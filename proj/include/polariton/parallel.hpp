#pragma once

#include <cstddef>
#include <exception>
#include <utility>
#include <vector>

#include <omp.h>

namespace polariton {

/// serial is the reference path kept for testing; openmp must reproduce it
/// bit for bit on independent work items.
enum class Execution { serial, openmp };

/// Worker cap: POLARITON_SIM_THREADS when set and positive, else the OpenMP default.
[[nodiscard]] int max_workers();

/// Calls fn(i) for i in [0, n). Work items must not share mutable state.
/// The first exception by index is rethrown after all items finish.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_workers())
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace polariton
