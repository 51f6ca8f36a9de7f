#include "hrcsyn/exec.hpp"

#if defined(HRCSYN_HAVE_OPENMP)
#include <omp.h>
#endif

namespace hrcsyn {

bool openmp_enabled() noexcept {
#if defined(HRCSYN_HAVE_OPENMP)
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#if defined(HRCSYN_HAVE_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace hrcsyn
