#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace hrcsyn {

/// Serial is the reference path; Parallel fans independent iterations out
/// over OpenMP threads when the library is built with OpenMP. Both paths
/// produce identical results.
enum class ExecPolicy { Serial, Parallel };

bool openmp_enabled() noexcept;
int max_threads() noexcept;

/// Runs body(i) for i in [0, n). Iterations must write disjoint outputs.
/// An exception from any iteration is rethrown after the loop; the one
/// with the lowest index wins so failures are reproducible.
template <typename Body>
void for_each_index(std::size_t n, ExecPolicy policy, Body&& body) {
#if defined(HRCSYN_HAVE_OPENMP)
  if (policy == ExecPolicy::Parallel) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
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
    return;
  }
#else
  (void)policy;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace hrcsyn
