#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spindlelab/rng.hpp"

namespace spindlelab {

// Thread count for parallel regions: explicit request, else the
// SPINDLELAB_THREADS environment variable, else the OpenMP default.
int resolve_threads(int requested = 0);

// Serial reference runner. Replicate k consumes exactly the substream
// (master, experiment, k); results land by index.
template <typename T, typename Fn>
std::vector<T> map_replicates_serial(std::size_t count, std::uint64_t master,
                                     std::uint64_t experiment, Fn&& fn) {
  std::vector<T> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    RandomStream rng = RandomStream::substream(master, experiment, k);
    out[k] = fn(k, rng);
  }
  return out;
}

// OpenMP runner; bit-identical to the serial reference for any thread count
// because streams and output slots are tied to the replicate index.
template <typename T, typename Fn>
std::vector<T> map_replicates(std::size_t count, std::uint64_t master,
                              std::uint64_t experiment, int threads, Fn&& fn) {
  const int nthreads = resolve_threads(threads);
  if (nthreads <= 1) {
    return map_replicates_serial<T>(count, master, experiment, fn);
  }
  std::vector<T> out(count);
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
  for (long long k = 0; k < static_cast<long long>(count); ++k) {
    RandomStream rng =
        RandomStream::substream(master, experiment, static_cast<std::uint64_t>(k));
    out[static_cast<std::size_t>(k)] = fn(static_cast<std::size_t>(k), rng);
  }
  return out;
}

}  // namespace spindlelab
