#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spindlelab/bodies.hpp"
#include "spindlelab/caps.hpp"
#include "spindlelab/geometry.hpp"
#include "spindlelab/stats.hpp"

namespace spindlelab {

inline constexpr std::string_view kToolVersion = "spindlelab/0.1.0";

// Malformed input text (config or point file); exit code 2.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BodyConfig {
  std::string kind = "disc";  // "disc" | "ellipse"
  double a = 1.0;
  double b = 1.0;
};

std::unique_ptr<ConvexBody> make_body(const BodyConfig& cfg);

struct ExperimentConfig {
  BodyConfig body;
  double r = 2.0;
  std::vector<int> n_values;
  std::size_t replicates = 0;
  std::uint64_t master_seed = 1;
  std::vector<std::string> estimators;  // subset of the known estimator names

  bool has_estimator(std::string_view name) const;
};

// Parses and validates; throws ParseError for malformed text and DomainError
// for parameter-regime violations (r <= r_M and friends).
ExperimentConfig parse_experiment_config(const std::string& text);

// Sorted-key, number-normalized form of a JSON config document.
std::string canonical_config_text(const std::string& text);
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

struct CapsConfig;
std::uint64_t experiment_config_hash(const ExperimentConfig& cfg);
std::uint64_t caps_config_hash(const CapsConfig& cfg);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

void write_file_atomic(const std::string& path, const std::string& content);

// ---- simulation -----------------------------------------------------------

struct ReplicateOutcome {
  double area = 0.0;
  int vertices = 0;
};

// One experiment draw: n uniform points and their radius-r hull.
ReplicateOutcome simulate_once(const ConvexBody& body, double r, int n,
                               RandomStream& rng);

struct SampleSummary {
  int n = 0;
  std::size_t m = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double stderr_mean = 0.0;
  double mean_vertex_count = 0.0;
};

struct SimulatedSample {
  std::vector<double> areas;
  std::vector<double> vertex_counts;
  SampleSummary summary;
};

// m replicates at one n; replicate streams keyed by (master, n). The heavy
// loop runs on `threads` workers, reduction stays in replicate order.
SimulatedSample simulate_sample(const ConvexBody& body, double r, int n,
                                std::size_t m, std::uint64_t master, int threads);

struct ExpectationRow {
  SampleSummary summary;
  double rescaled_mean = 0.0;    // (A(K) - mean) * n^(2/3)
  double rescaled_stderr = 0.0;  // stderr * n^(2/3)
};

ExpectationRow rescale_expectation(const ConvexBody& body, const SampleSummary& s);

// Raw and rescaled missed-area means across an n grid; the rescaled series
// approaches expected_area_constant(body, r) from below as n grows.
std::vector<ExpectationRow> run_expectation(const ConvexBody& body, double r,
                                            std::span<const int> n_values,
                                            std::size_t m, std::uint64_t master,
                                            int threads);

struct VarianceScalingResult {
  std::vector<SampleSummary> per_n;
  ScalingFit fit;  // slope of log Var against log n
};

VarianceScalingResult run_variance_scaling(const ConvexBody& body, double r,
                                           std::span<const int> n_values,
                                           std::size_t m, std::uint64_t master,
                                           int threads);

struct CltRow {
  int n = 0;
  std::size_t m = 0;
  double d_w = 0.0;
  double ks = 0.0;
  double skew = 0.0;
  double kurt = 0.0;
  double se_d_w = 0.0;
  double se_ks = 0.0;
  double se_skew = 0.0;
  double se_kurt = 0.0;
};

// Normality statistics of a standardized sample, with bootstrap standard
// errors (deterministic: resampling streams derive from `master`).
CltRow clt_statistics(const StandardizedSample& sample, std::uint64_t master,
                      int bootstrap_rounds = 200);

// ---- difference operators --------------------------------------------------

// A(points) - A(points without i), clamped at zero; removing a point can
// only shrink the hull.
double first_difference(std::span<const Point> points, std::size_t i, double r);
// A(x) - A(x^-i) - A(x^-j) + A(x^-i,-j), symmetric in (i, j).
double second_difference(std::span<const Point> points, std::size_t i,
                         std::size_t j, double r);

struct MomentEstimates {
  int n = 0;
  std::size_t m = 0;
  double b3 = 0.0;  // E|D1 A|^3
  double b4 = 0.0;  // E|D1 A|^4
  double se3 = 0.0;
  double se4 = 0.0;
};

MomentEstimates estimate_b34(const ConvexBody& body, double r, int n, std::size_t m,
                             std::uint64_t master, int threads);

// P(D_{1,2} A != 0), nonzero meaning |D| > 1e-14 * A(K).
MonteCarloEstimate interaction_probability(const ConvexBody& body, double r, int n,
                                           std::size_t m, std::uint64_t master,
                                           int threads);

struct NormalBoundRow {
  int n = 0;
  double var_area = 0.0;
  double b3 = 0.0;
  double b4 = 0.0;
  double n_b3_f = 0.0;       // n * B3(f) with f the standardized area
  double sqrt_n_b4_f = 0.0;  // sqrt(n * B4(f))
};

struct NormalBoundReport {
  std::vector<NormalBoundRow> rows;
  double n_b3_exponent = 0.0;       // fitted decay of n*B3(f) against n
  double sqrt_n_b4_exponent = 0.0;  // fitted decay of sqrt(n*B4(f))
  std::string b1 = "not estimated";
  std::string b2 = "not estimated";
};

NormalBoundReport normal_bound_report(const ConvexBody& body, double r,
                                      std::span<const int> n_values,
                                      std::size_t m_sim, std::size_t m_diff,
                                      std::uint64_t master, int threads);

// ---- CSV / file outputs ----------------------------------------------------

struct CsvRow {
  int n = 0;
  std::size_t m = 0;
  std::optional<double> mean_area, var_area, stderr_mean, rescaled_mean;
  std::optional<double> d_w, ks, skew, kurt, b3, b4, p_interact;
  std::uint64_t seed = 0;
};

// Header: n,m,mean_area,var_area,stderr,rescaled_mean,d_w,ks,skew,kurt,b3,b4,p_interact,seed
// preceded by a comment line carrying the config hash and master seed.
std::string format_csv(std::span<const CsvRow> rows, std::uint64_t config_hash);

struct ExperimentOutput {
  std::string csv;
  std::optional<std::string> normal_bound_json;  // when diffops is selected
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg, int threads);

struct CltOutput {
  std::string csv;
  std::string sample_dump;  // standardized replicates, one value per line
};

CltOutput run_clt(const ExperimentConfig& cfg, int threads);

// ---- cap / floating-body report --------------------------------------------

struct CapsConfig {
  BodyConfig body;
  double r = 2.0;
  std::vector<double> t_values;
  std::size_t probes = 10000;      // sandwich probes per t
  std::size_t samples = 1000000;   // Monte Carlo samples per estimate
  int boundary_points = 8;         // visibility viewpoints
  int directions = 2048;           // floating-body polygonalization
  double cap_height = 1e-4;        // height for the cap-area limit check
  std::uint64_t master_seed = 1;
  std::vector<std::string> checks;  // subset of cap_limit|sandwich|wet|visibility
};

CapsConfig parse_caps_config(const std::string& text);

// JSON report with one record per check; deterministic for a fixed config.
std::string run_caps_report(const CapsConfig& cfg, int threads);

std::string manifest_json(std::uint64_t config_hash, std::uint64_t master_seed,
                          std::string_view started_at, std::string_view finished_at,
                          std::span<const std::string> outputs);

}  // namespace spindlelab
