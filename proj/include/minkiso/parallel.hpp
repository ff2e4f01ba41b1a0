#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace minkiso {

/// Worker count for the OpenMP kernels: the OpenMP default, capped by the
/// ISOPHOTE_THREADS environment variable when it holds a positive integer.
int thread_count();

/// True when the library was compiled with OpenMP.
bool openmp_enabled() noexcept;

/// Runs body(k) for k in [0, n) across thread_count() workers. If any call
/// throws, the exception of the smallest failing k is rethrown afterwards, so
/// the reported error does not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  bool any = false;
  const auto total = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic, 64) reduction(|| : any)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
      any = true;
    }
  }
  if (any) {
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
}

}  // namespace minkiso
