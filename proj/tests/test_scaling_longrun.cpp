// Slow scaling properties of the Monte Carlo estimators; several minutes of
// compute on one core, kept out of the fast unit suites.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spindlelab/experiments.hpp"

using namespace spindlelab;

TEST_CASE("interaction probability decays with slope near -5/3") {
  const auto disc = make_unit_disc();
  const std::vector<int> ns{100, 200, 400, 800, 1600};
  std::vector<double> nd, ps;
  for (int n : ns) {
    // sample sizes scale so each estimate keeps a useful hit count
    const std::size_t m = static_cast<std::size_t>(20000.0 * std::pow(n / 100.0, 1.4));
    const MonteCarloEstimate est =
        interaction_probability(*disc, 2.0, n, m, 20240807, 0);
    CHECK(est.value > 0.0);
    CHECK(est.std_error < 0.25 * est.value);
    if (!nd.empty()) CHECK(ps.back() > est.value);  // decreasing in n
    nd.push_back(static_cast<double>(n));
    ps.push_back(est.value);
  }
  const double slope = fit_log_log(nd, ps).exponent;
  // -5/3 up to log factors
  CHECK(slope > -2.0);
  CHECK(slope < -1.3);
}

TEST_CASE("mean vertex count grows with slope near 1/3") {
  const auto disc = make_unit_disc();
  const std::vector<int> ns{100, 200, 400, 800, 1600};
  std::vector<double> nd, f0;
  for (int n : ns) {
    const SimulatedSample s = simulate_sample(*disc, 2.0, n, 3000, 20240808, 0);
    nd.push_back(static_cast<double>(n));
    f0.push_back(s.summary.mean_vertex_count);
  }
  const double slope = fit_log_log(nd, f0).exponent;
  CHECK(slope > 0.25);
  CHECK(slope < 0.42);
}

TEST_CASE("rescaled missed-area series is bounded with shrinking steps") {
  const auto disc = make_unit_disc();
  std::vector<double> rescaled;
  for (int n : {250, 1000, 4000}) {
    const SimulatedSample s = simulate_sample(*disc, 2.0, n, 20000, 20240809, 0);
    rescaled.push_back(rescale_expectation(*disc, s.summary).rescaled_mean);
  }
  const double c = expected_area_constant(*disc, 2.0);
  for (double v : rescaled) {
    CHECK(v > 0.5 * c);
    CHECK(v < 1.5 * c);
  }
  CHECK(std::abs(rescaled[2] - rescaled[1]) < std::abs(rescaled[1] - rescaled[0]) + 0.02);
}
