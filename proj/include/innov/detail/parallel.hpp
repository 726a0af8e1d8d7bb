#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace innov::detail {

// Runs body(i) for i in [0,n), in parallel when OpenMP is enabled, then
// rethrows the exception of the lowest failing index so failures are as
// deterministic as results.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace innov::detail
