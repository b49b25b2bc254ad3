// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Optional argv[1] is the CLI binary for the determinism
// check; without it that check runs in-process.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spindlelab/caps.hpp"
#include "spindlelab/engine.hpp"
#include "spindlelab/experiments.hpp"

using namespace spindlelab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%d] %-28s %s  (%s; %.1fs)\n", idx, name, pass ? "PASS" : "FAIL",
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ---- 1: hull containment vs the definitional membership oracle -------------

void criterion_hull_oracle() {
  const auto t0 = Clock::now();
  const double radii[3] = {1.5, 2.0, 5.0};
  long long checked = 0;
  long long disagreements = 0;
  RandomStream rng(424242);
  const auto disc = make_unit_disc();
  for (int cfg = 0; cfg < 500; ++cfg) {
    const int n = 1 + static_cast<int>(rng.next_double() * 8.0);
    const double r = radii[cfg % 3];
    std::vector<Point> pts(static_cast<std::size_t>(n));
    for (Point& p : pts) p = sample_uniform(*disc, rng);
    const DiscPolygon hull = spindle_hull(pts, r);
    for (int k = 0; k < 1000; ++k) {
      const Point q{rng.next_in(-1.2, 1.2), rng.next_in(-1.2, 1.2)};
      bool near_boundary = false;
      for (const Arc& a : hull.arcs()) {
        near_boundary =
            near_boundary || std::abs(dist(q, a.center) - a.radius) <= kGeomEps;
      }
      if (hull.arcs().empty()) {
        for (const Point& v : hull.vertices()) {
          near_boundary = near_boundary || std::abs(dist(q, v)) <= kGeomEps;
        }
      }
      if (near_boundary) continue;
      ++checked;
      if (hull.contains(q) != hull_membership_oracle(pts, r, q, 16)) {
        ++disagreements;
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool pass = disagreements == 0 && secs < 60.0;
  report(1, "hull-oracle equivalence", pass,
         std::to_string(checked) + " probes, " + std::to_string(disagreements) +
             " disagreements",
         secs);
}

// ---- 2: rescaled expected missed area approaches the limit constant --------

void criterion_expectation() {
  const auto t0 = Clock::now();
  const auto disc = make_unit_disc();
  const double r = 2.0;
  const double c = expected_area_constant(*disc, r);
  const std::size_t m = 100000;
  const std::uint64_t seed = 20240801;

  const std::vector<int> ns{250, 1000, 4000};
  const std::vector<ExpectationRow> rows = run_expectation(*disc, r, ns, m, seed, 0);
  double rescaled[3];
  for (int i = 0; i < 3; ++i) rescaled[i] = rows[static_cast<std::size_t>(i)].rescaled_mean;
  const double rel = std::abs(rescaled[2] - c) / c;
  const bool toward = std::abs(rescaled[2] - c) < std::abs(rescaled[0] - c);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(2, "expectation limit", rel < 0.10 && toward,
         "rescaled means {" + fmt(rescaled[0]) + ", " + fmt(rescaled[1]) + ", " +
             fmt(rescaled[2]) + "} vs c=" + fmt(c) + ", rel err " + fmt(rel),
         secs);
}

// ---- 3: variance decays like n^{-5/3} --------------------------------------

void criterion_variance_scaling() {
  const auto t0 = Clock::now();
  const auto disc = make_unit_disc();
  const std::vector<int> ns{100, 200, 400, 800, 1600, 3200};
  const VarianceScalingResult res =
      run_variance_scaling(*disc, 2.0, ns, 20000, 20240802, 0);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool pass = std::abs(res.fit.exponent + 5.0 / 3.0) < 0.15 &&
                    res.fit.r_squared > 0.98;
  report(3, "variance scaling", pass,
         "slope " + fmt(res.fit.exponent) + " (target -1.667 +- 0.15), r^2 " +
             fmt(res.fit.r_squared),
         secs);
}

// ---- 4: standardized areas look normal -------------------------------------

void criterion_clt() {
  const auto t0 = Clock::now();
  const auto disc = make_unit_disc();
  const std::size_t m = 10000;
  const std::uint64_t seed = 20240803;

  const SimulatedSample s100 = simulate_sample(*disc, 2.0, 100, m, seed, 0);
  const SimulatedSample s2000 = simulate_sample(*disc, 2.0, 2000, m, seed, 0);
  const double dw100 = wasserstein_to_normal(standardize(100, s100.areas).values);
  const StandardizedSample std2000 = standardize(2000, s2000.areas);
  const double dw = wasserstein_to_normal(std2000.values);
  const double sk = skewness(std2000.values);
  const double ku = excess_kurtosis(std2000.values);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool pass =
      dw < 0.05 && std::abs(sk) < 0.2 && std::abs(ku) < 0.3 && dw < dw100;
  report(4, "central limit theorem", pass,
         "d_W " + fmt(dw) + " (n=100: " + fmt(dw100) + "), skew " + fmt(sk) +
             ", ex.kurt " + fmt(ku),
         secs);
}

// ---- 5: disc-cap area limit -------------------------------------------------

void criterion_cap_limit() {
  const auto t0 = Clock::now();
  const double r = 5.0;
  const double h = 1e-4;
  const auto disc = make_unit_disc();
  const auto ell = make_ellipse(2.0, 1.0);
  double worst = 0.0;
  for (const ConvexBody* body : {disc.get(), ell.get()}) {
    const double kappa = body->curvature(0.0);
    const double limit = (4.0 / 3.0) * std::sqrt(2.0 / (kappa - 1.0 / r));
    const double ratio =
        disc_cap_area(DiscCap{body, 0.0, h, r}) / (h * std::sqrt(h));
    worst = std::max(worst, std::abs(ratio - limit) / limit);
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(5, "cap-area limit", worst < 0.01,
         "worst relative deviation " + fmt(worst) + " (tol 0.01)", secs);
}

// ---- 6: floating-body sandwich ----------------------------------------------

void criterion_sandwich() {
  const auto t0 = Clock::now();
  const auto disc = make_unit_disc();
  const auto ell = make_ellipse(2.0, 1.0);
  bool pass = true;
  std::string detail;
  int stream = 0;
  for (const ConvexBody* body : {disc.get(), ell.get()}) {
    const double r = 1.5 * curvature_summary(*body).r_M;
    double c0[2];
    for (int i = 0; i < 2; ++i) {
      const double t = (i == 0) ? 1e-3 : 1e-4;
      RandomStream rng = RandomStream::substream(20240804, 600 + stream++, 0);
      const SandwichReport rep = sandwich_check(*body, t, r, 10000, rng);
      pass = pass && rep.violations == 0 && rep.empirical_c0 > 0.0 &&
             rep.empirical_c0 < 1.0;
      c0[i] = rep.empirical_c0;
    }
    const double mean = 0.5 * (c0[0] + c0[1]);
    pass = pass && std::abs(c0[0] - c0[1]) <= 0.2 * mean;
    detail += body->kind() + " c0 {" + fmt(c0[0]) + ", " + fmt(c0[1]) + "} ";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(6, "floating-body sandwich", pass, detail + "0 violations required", secs);
}

// ---- 7: visibility regions have area O(t) -----------------------------------

void criterion_visibility() {
  const auto t0 = Clock::now();
  const auto disc = make_unit_disc();
  const auto ell = make_ellipse(2.0, 1.0);
  bool pass = true;
  double worst_spread = 0.0;
  int stream = 0;
  for (const ConvexBody* body : {disc.get(), ell.get()}) {
    const double r = 1.5 * curvature_summary(*body).r_M;
    const double ts[3] = {1e-3, 3e-4, 1e-4};
    const std::size_t samples[3] = {2000000, 4000000, 8000000};
    std::vector<std::vector<double>> ratios(8, std::vector<double>(3));
    for (int ti = 0; ti < 3; ++ti) {
      const FloatingBodyApprox obstacle(
          {body, ts[ti], FloatingBodyKind::spindle, r}, 2048);
      for (int zi = 0; zi < 8; ++zi) {
        RandomStream rng = RandomStream::substream(20240805, 700 + stream++, 0);
        const VisibilityEstimate est =
            visibility_area(obstacle, zi / 8.0, samples[ti], rng);
        ratios[zi][ti] = est.area / ts[ti];
      }
    }
    for (int zi = 0; zi < 8; ++zi) {
      const double mean =
          (ratios[zi][0] + ratios[zi][1] + ratios[zi][2]) / 3.0;
      for (int ti = 0; ti < 3; ++ti) {
        const double spread = std::abs(ratios[zi][ti] - mean) / mean;
        worst_spread = std::max(worst_spread, spread);
        pass = pass && spread < 0.30;
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(7, "visibility bounded ratio", pass,
         "worst spread of area/t around its mean: " + fmt(worst_spread) +
             " (tol 0.30)",
         secs);
}

// ---- 8: first-difference moment scalings ------------------------------------

void criterion_moment_scaling() {
  const auto t0 = Clock::now();
  const auto disc = make_unit_disc();
  const std::vector<int> ns{100, 200, 400, 800, 1600};
  std::vector<double> nd, b3, b4;
  for (int n : ns) {
    const MomentEstimates mom = estimate_b34(*disc, 2.0, n, 60000, 20240806, 0);
    nd.push_back(static_cast<double>(n));
    b3.push_back(mom.b3);
    b4.push_back(mom.b4);
  }
  const double e3 = fit_log_log(nd, b3).exponent;
  const double e4 = fit_log_log(nd, b4).exponent;
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool pass = e3 > -4.0 && e3 < -3.3 && e4 > -5.1 && e4 < -4.3;
  report(8, "difference-moment scaling", pass,
         "E|D1A|^3 slope " + fmt(e3) + " in [-4.0,-3.3], E|D1A|^4 slope " +
             fmt(e4) + " in [-5.1,-4.3]",
         secs);
}

// ---- 9: byte-identical reruns across thread counts ---------------------------

void criterion_determinism(const char* cli) {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail;
  if (cli != nullptr) {
    const fs::path dir = fs::temp_directory_path() / "spindlelab_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
      std::ofstream cfg(dir / "cfg.json");
      cfg << R"({"body": {"kind": "disc"}, "r": 2.0, "n_values": [64, 128],
                 "replicates": 200, "master_seed": 11,
                 "estimators": ["expectation", "variance", "interaction"]})";
    }
    const auto run_once = [&](const std::string& tag, int threads) {
      std::ostringstream cmd;
      cmd << cli << " experiment --config " << (dir / "cfg.json").string()
          << " --out " << (dir / tag).string() << " --threads " << threads
          << " --quiet";
      return std::system(cmd.str().c_str());
    };
    pass = run_once("a", 1) == 0 && run_once("b", 8) == 0 && run_once("c", 8) == 0;
    const auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const std::string a = slurp(dir / "a" / "experiment.csv");
    pass = pass && !a.empty() && a == slurp(dir / "b" / "experiment.csv") &&
           a == slurp(dir / "c" / "experiment.csv");
    detail = "CLI reruns with --threads {1,8,8}";
    fs::remove_all(dir);
  } else {
    const ExperimentConfig cfg = parse_experiment_config(
        R"({"body": {"kind": "disc"}, "r": 2.0, "n_values": [64, 128],
            "replicates": 200, "master_seed": 11,
            "estimators": ["expectation", "variance", "interaction"]})");
    const std::string a = run_experiment(cfg, 1).csv;
    const std::string b = run_experiment(cfg, 8).csv;
    const std::string c = run_experiment(cfg, 8).csv;
    pass = !a.empty() && a == b && b == c;
    detail = "in-process runs with threads {1,8,8}";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(9, "deterministic CSV", pass, detail, secs);
}

}  // namespace

int main(int argc, char** argv) {
  std::printf("acceptance suite, %d worker thread(s)\n", resolve_threads(0));
  criterion_hull_oracle();
  criterion_expectation();
  criterion_variance_scaling();
  criterion_clt();
  criterion_cap_limit();
  criterion_sandwich();
  criterion_visibility();
  criterion_moment_scaling();
  criterion_determinism(argc > 1 ? argv[1] : nullptr);
  if (g_failures == 0) {
    std::printf("all 9 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", g_failures);
  return 1;
}
