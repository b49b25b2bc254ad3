// Compares the serial reference replicate runner against the OpenMP runner
// on the hull-simulation workload and verifies their outputs are identical.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "spindlelab/engine.hpp"
#include "spindlelab/experiments.hpp"

using namespace spindlelab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t m = 2000;
  if (argc > 1) m = static_cast<std::size_t>(std::atoll(argv[1]));
  const auto body = make_unit_disc();
  const double r = 2.0;
  const std::uint64_t seed = 20240817;
  const int threads = resolve_threads(0);

  std::printf("engine benchmark: hull simulation, unit disc, r=%.1f, %d thread(s)\n",
              r, threads);
  std::printf("%8s %8s %12s %12s %9s %10s\n", "n", "m", "serial[s]", "openmp[s]",
              "speedup", "identical");

  for (int n : {100, 400, 1600}) {
    const auto runner = [&](std::size_t, RandomStream& rng) {
      return simulate_once(*body, r, n, rng);
    };
    const auto t0 = Clock::now();
    const auto serial = map_replicates_serial<ReplicateOutcome>(m, seed, 1, runner);
    const double ts = seconds_since(t0);

    const auto t1 = Clock::now();
    const auto parallel =
        map_replicates<ReplicateOutcome>(m, seed, 1, threads, runner);
    const double tp = seconds_since(t1);

    bool identical = serial.size() == parallel.size();
    for (std::size_t k = 0; identical && k < serial.size(); ++k) {
      identical = std::memcmp(&serial[k].area, &parallel[k].area, sizeof(double)) == 0 &&
                  serial[k].vertices == parallel[k].vertices;
    }
    std::printf("%8d %8zu %12.4f %12.4f %8.2fx %10s\n", n, m, ts, tp, ts / tp,
                identical ? "yes" : "NO");
    if (!identical) return 1;
  }
  return 0;
}
