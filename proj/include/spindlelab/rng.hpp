#pragma once

#include <cstdint>

namespace spindlelab {

// Splittable counter-based stream (SplitMix64). Substreams are derived from
// (master_seed, experiment, replicate), so replicate k draws the same values
// no matter which thread runs it or in which order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static RandomStream substream(std::uint64_t master, std::uint64_t experiment,
                                std::uint64_t replicate) {
    std::uint64_t s = mix(master + kGamma * (experiment + 1));
    s = mix(s + kGamma * (replicate + 1));
    return RandomStream(s);
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

}  // namespace spindlelab
