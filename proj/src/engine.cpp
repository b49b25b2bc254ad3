#include "spindlelab/engine.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spindlelab {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* s = std::getenv("SPINDLELAB_THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace spindlelab
