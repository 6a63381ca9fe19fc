#pragma once

#include <cstddef>
#include <exception>

#include <omp.h>

namespace aging {

/// Serial runs are the reference path; parallel runs must reproduce them
/// bit for bit since every grid point is an independent pure computation.
enum class Execution { Serial, Parallel };

/// Caps the OpenMP team size; values < 1 restore the machine default.
void set_thread_limit(int threads);
int thread_limit();

/// Calls body(i) for i in [0, count). Under Execution::Parallel iterations
/// are spread over an OpenMP team; if any iteration throws, the exception
/// from the lowest failing index is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, Execution execution, Body&& body) {
  if (execution == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::size_t first_index = count;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(aging_for_each_index)
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace aging
