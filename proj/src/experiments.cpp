#include "spindlelab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spindlelab/engine.hpp"
#include "spindlelab/normal.hpp"

namespace spindlelab {

using nlohmann::json;

namespace {

// Substream families; combined with n so estimator selection never shifts
// the draws of another estimator.
namespace streams {
constexpr std::uint64_t kSimulate = 0x5131;
constexpr std::uint64_t kDiffops = 0x5132;
constexpr std::uint64_t kInteraction = 0x5133;
constexpr std::uint64_t kBootstrap = 0x5134;
constexpr std::uint64_t kCapsSandwich = 0x5135;
constexpr std::uint64_t kCapsWet = 0x5136;
constexpr std::uint64_t kCapsVisibility = 0x5137;

std::uint64_t id(std::uint64_t kind, std::uint64_t tag) {
  return kind * 0x100000001B3ULL + tag;
}
}  // namespace streams

const std::set<std::string> kKnownEstimators = {"expectation", "variance", "clt",
                                                "diffops", "interaction"};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }
}

BodyConfig body_from_json(const json& j) {
  BodyConfig cfg;
  try {
    cfg.kind = j.at("kind").get<std::string>();
    if (cfg.kind == "ellipse") {
      cfg.a = j.at("a").get<double>();
      cfg.b = j.at("b").get<double>();
    } else if (cfg.kind != "disc") {
      throw ParseError("config: body.kind must be \"disc\" or \"ellipse\"");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: bad body spec: ") + e.what());
  }
  return cfg;
}

json body_to_json(const BodyConfig& cfg) {
  json j;
  j["kind"] = cfg.kind;
  if (cfg.kind == "ellipse") {
    j["a"] = cfg.a;
    j["b"] = cfg.b;
  }
  return j;
}

void validate_radius(const ConvexBody& body, double r) {
  const CurvatureSummary cs = curvature_summary(body);
  if (!(r > cs.r_M)) {
    throw DomainError("r must exceed r_M = " + format_double(cs.r_M) +
                      " for this body (got r = " + format_double(r) + ")");
  }
}

}  // namespace

std::unique_ptr<ConvexBody> make_body(const BodyConfig& cfg) {
  if (cfg.kind == "disc") return make_unit_disc();
  if (cfg.kind == "ellipse") return make_ellipse(cfg.a, cfg.b);
  throw ParseError("unknown body kind: " + cfg.kind);
}

bool ExperimentConfig::has_estimator(std::string_view name) const {
  return std::find(estimators.begin(), estimators.end(), name) != estimators.end();
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  const json j = parse_json(text);
  ExperimentConfig cfg;
  try {
    cfg.body = body_from_json(j.at("body"));
    cfg.r = j.at("r").get<double>();
    cfg.n_values = j.at("n_values").get<std::vector<int>>();
    cfg.replicates = j.at("replicates").get<std::size_t>();
    cfg.master_seed = j.value("master_seed", std::uint64_t{1});
    if (j.contains("estimators")) {
      cfg.estimators = j.at("estimators").get<std::vector<std::string>>();
    } else {
      cfg.estimators.assign(kKnownEstimators.begin(), kKnownEstimators.end());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field error: ") + e.what());
  }
  for (const auto& est : cfg.estimators) {
    if (!kKnownEstimators.count(est)) {
      throw ParseError("config: unknown estimator \"" + est + "\"");
    }
  }
  if (cfg.n_values.empty()) throw ParseError("config: n_values must be non-empty");
  for (int n : cfg.n_values) {
    if (n < 2) throw ParseError("config: every n must be >= 2");
  }
  if (cfg.replicates < 1) throw ParseError("config: replicates must be >= 1");
  if (cfg.replicates < 2 &&
      (cfg.has_estimator("variance") || cfg.has_estimator("clt") ||
       cfg.has_estimator("expectation"))) {
    throw ParseError("config: replicates must be >= 2 for variance estimation");
  }
  const auto body = make_body(cfg.body);
  validate_radius(*body, cfg.r);
  return cfg;
}

std::string canonical_config_text(const std::string& text) {
  return parse_json(text).dump();  // object keys are emitted sorted
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// ---- simulation -------------------------------------------------------------

ReplicateOutcome simulate_once(const ConvexBody& body, double r, int n,
                               RandomStream& rng) {
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (Point& p : pts) p = sample_uniform(body, rng);
  const DiscPolygon hull = spindle_hull(pts, r);
  return {hull.area(), static_cast<int>(hull.vertex_count())};
}

namespace {

SampleSummary summarize(int n, std::span<const double> areas,
                        std::span<const double> verts) {
  SampleSummary s;
  s.n = n;
  s.m = areas.size();
  s.mean = sample_mean(areas);
  s.variance = sample_variance(areas, s.mean);
  s.stderr_mean = std::sqrt(s.variance / static_cast<double>(s.m));
  s.mean_vertex_count = sample_mean(verts);
  return s;
}

}  // namespace

SimulatedSample simulate_sample(const ConvexBody& body, double r, int n,
                                std::size_t m, std::uint64_t master, int threads) {
  const auto outcomes = map_replicates<ReplicateOutcome>(
      m, master, streams::id(streams::kSimulate, static_cast<std::uint64_t>(n)),
      threads,
      [&](std::size_t, RandomStream& rng) { return simulate_once(body, r, n, rng); });
  SimulatedSample sample;
  sample.areas.reserve(m);
  sample.vertex_counts.reserve(m);
  for (const auto& o : outcomes) {
    sample.areas.push_back(o.area);
    sample.vertex_counts.push_back(static_cast<double>(o.vertices));
  }
  sample.summary = summarize(n, sample.areas, sample.vertex_counts);
  return sample;
}

ExpectationRow rescale_expectation(const ConvexBody& body, const SampleSummary& s) {
  const double scale = std::pow(static_cast<double>(s.n), 2.0 / 3.0);
  ExpectationRow row;
  row.summary = s;
  row.rescaled_mean = (body.area() - s.mean) * scale;
  row.rescaled_stderr = s.stderr_mean * scale;
  return row;
}

std::vector<ExpectationRow> run_expectation(const ConvexBody& body, double r,
                                            std::span<const int> n_values,
                                            std::size_t m, std::uint64_t master,
                                            int threads) {
  std::vector<ExpectationRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    const SimulatedSample s = simulate_sample(body, r, n, m, master, threads);
    rows.push_back(rescale_expectation(body, s.summary));
  }
  return rows;
}

VarianceScalingResult run_variance_scaling(const ConvexBody& body, double r,
                                           std::span<const int> n_values,
                                           std::size_t m, std::uint64_t master,
                                           int threads) {
  VarianceScalingResult result;
  std::vector<double> ns;
  std::vector<double> vars;
  for (int n : n_values) {
    const SimulatedSample s = simulate_sample(body, r, n, m, master, threads);
    result.per_n.push_back(s.summary);
    ns.push_back(static_cast<double>(n));
    vars.push_back(s.summary.variance);
  }
  result.fit = fit_log_log(ns, vars);
  return result;
}

CltRow clt_statistics(const StandardizedSample& sample, std::uint64_t master,
                      int bootstrap_rounds) {
  CltRow row;
  row.n = sample.n;
  row.m = sample.values.size();
  row.d_w = wasserstein_to_normal(sample.values);
  row.ks = ks_to_normal(sample.values);
  row.skew = skewness(sample.values);
  row.kurt = excess_kurtosis(sample.values);

  const std::size_t m = sample.values.size();
  std::vector<double> dw(bootstrap_rounds), ks(bootstrap_rounds),
      sk(bootstrap_rounds), ku(bootstrap_rounds);
  const std::uint64_t exp_id =
      streams::id(streams::kBootstrap, static_cast<std::uint64_t>(sample.n));
  for (int b = 0; b < bootstrap_rounds; ++b) {
    RandomStream rng =
        RandomStream::substream(master, exp_id, static_cast<std::uint64_t>(b));
    std::vector<double> re(m);
    for (std::size_t i = 0; i < m; ++i) {
      re[i] = sample.values[static_cast<std::size_t>(rng.next_double() *
                                                     static_cast<double>(m))];
    }
    const StandardizedSample rs = standardize(sample.n, re);
    dw[static_cast<std::size_t>(b)] = wasserstein_to_normal(rs.values);
    ks[static_cast<std::size_t>(b)] = ks_to_normal(rs.values);
    sk[static_cast<std::size_t>(b)] = skewness(rs.values);
    ku[static_cast<std::size_t>(b)] = excess_kurtosis(rs.values);
  }
  const auto sd = [](std::span<const double> v) {
    return std::sqrt(sample_variance(v, sample_mean(v)));
  };
  row.se_d_w = sd(dw);
  row.se_ks = sd(ks);
  row.se_skew = sd(sk);
  row.se_kurt = sd(ku);
  return row;
}

// ---- difference operators ----------------------------------------------------

namespace {

std::vector<Point> without(std::span<const Point> pts, std::size_t i,
                           std::size_t j = static_cast<std::size_t>(-1)) {
  std::vector<Point> rest;
  rest.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k != i && k != j) rest.push_back(pts[k]);
  }
  return rest;
}

}  // namespace

double first_difference(std::span<const Point> points, std::size_t i, double r) {
  if (i >= points.size()) throw std::out_of_range("first_difference: index");
  const std::vector<Point> rest = without(points, i);
  const DiscPolygon base = spindle_hull(rest, r);
  if (base.contains(points[i])) return 0.0;
  const double grown = spindle_hull(points, r).area();
  return std::max(0.0, grown - base.area());
}

double second_difference(std::span<const Point> points, std::size_t i,
                         std::size_t j, double r) {
  if (i >= points.size() || j >= points.size()) {
    throw std::out_of_range("second_difference: index");
  }
  if (i == j) throw std::out_of_range("second_difference: i == j");
  if (points.size() < 3) {
    throw std::out_of_range("second_difference: need at least 3 points");
  }
  const std::vector<Point> rest = without(points, i, j);
  const DiscPolygon base = spindle_hull(rest, r);
  // A point inside the reduced hull contributes nothing to any superset hull.
  if (base.contains(points[i]) || base.contains(points[j])) return 0.0;
  const double a_all = spindle_hull(points, r).area();
  const double a_i = spindle_hull(without(points, i), r).area();
  const double a_j = spindle_hull(without(points, j), r).area();
  return a_all - a_i - a_j + base.area();
}

MomentEstimates estimate_b34(const ConvexBody& body, double r, int n, std::size_t m,
                             std::uint64_t master, int threads) {
  const auto diffs = map_replicates<double>(
      m, master, streams::id(streams::kDiffops, static_cast<std::uint64_t>(n)),
      threads, [&](std::size_t, RandomStream& rng) {
        std::vector<Point> pts(static_cast<std::size_t>(n));
        for (Point& p : pts) p = sample_uniform(body, rng);
        return first_difference(pts, 0, r);
      });
  std::vector<double> d3(m), d4(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double a = std::abs(diffs[k]);
    d3[k] = a * a * a;
    d4[k] = d3[k] * a;
  }
  MomentEstimates est;
  est.n = n;
  est.m = m;
  est.b3 = sample_mean(d3);
  est.b4 = sample_mean(d4);
  est.se3 = std::sqrt(sample_variance(d3, est.b3) / static_cast<double>(m));
  est.se4 = std::sqrt(sample_variance(d4, est.b4) / static_cast<double>(m));
  return est;
}

MonteCarloEstimate interaction_probability(const ConvexBody& body, double r, int n,
                                           std::size_t m, std::uint64_t master,
                                           int threads) {
  const double tol = 1e-14 * body.area();
  const auto hits = map_replicates<char>(
      m, master, streams::id(streams::kInteraction, static_cast<std::uint64_t>(n)),
      threads, [&](std::size_t, RandomStream& rng) -> char {
        std::vector<Point> pts(static_cast<std::size_t>(n));
        for (Point& p : pts) p = sample_uniform(body, rng);
        return std::abs(second_difference(pts, 0, 1, r)) > tol ? 1 : 0;
      });
  std::size_t count = 0;
  for (char h : hits) count += static_cast<std::size_t>(h);
  const double p = static_cast<double>(count) / static_cast<double>(m);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(m)), m};
}

NormalBoundReport normal_bound_report(const ConvexBody& body, double r,
                                      std::span<const int> n_values,
                                      std::size_t m_sim, std::size_t m_diff,
                                      std::uint64_t master, int threads) {
  NormalBoundReport report;
  std::vector<double> ns, nb3, nb4;
  for (int n : n_values) {
    const SimulatedSample sim = simulate_sample(body, r, n, m_sim, master, threads);
    const MomentEstimates mom = estimate_b34(body, r, n, m_diff, master, threads);
    NormalBoundRow row;
    row.n = n;
    row.var_area = sim.summary.variance;
    row.b3 = mom.b3;
    row.b4 = mom.b4;
    const double v = sim.summary.variance;
    row.n_b3_f = static_cast<double>(n) * mom.b3 / (v * std::sqrt(v));
    row.sqrt_n_b4_f = std::sqrt(static_cast<double>(n) * mom.b4 / (v * v));
    report.rows.push_back(row);
    ns.push_back(static_cast<double>(n));
    nb3.push_back(row.n_b3_f);
    nb4.push_back(row.sqrt_n_b4_f);
  }
  report.n_b3_exponent = fit_log_log(ns, nb3).exponent;
  report.sqrt_n_b4_exponent = fit_log_log(ns, nb4).exponent;
  return report;
}

// ---- CSV / drivers ------------------------------------------------------------

std::string format_csv(std::span<const CsvRow> rows, std::uint64_t config_hash) {
  std::string out;
  out += "# config_hash=" + hash_hex(config_hash);
  if (!rows.empty()) {
    out += " master_seed=" + std::to_string(rows.front().seed);
  }
  out += " tool=";
  out += kToolVersion;
  out += "\n";
  out += "n,m,mean_area,var_area,stderr,rescaled_mean,d_w,ks,skew,kurt,b3,b4,p_interact,seed\n";
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const CsvRow& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.m) + "," +
           cell(r.mean_area) + "," + cell(r.var_area) + "," + cell(r.stderr_mean) +
           "," + cell(r.rescaled_mean) + "," + cell(r.d_w) + "," + cell(r.ks) + "," +
           cell(r.skew) + "," + cell(r.kurt) + "," + cell(r.b3) + "," + cell(r.b4) +
           "," + cell(r.p_interact) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

namespace {

json experiment_config_json(const ExperimentConfig& cfg) {
  json j;
  j["body"] = body_to_json(cfg.body);
  j["r"] = cfg.r;
  j["n_values"] = cfg.n_values;
  j["replicates"] = cfg.replicates;
  j["master_seed"] = cfg.master_seed;
  std::vector<std::string> est = cfg.estimators;
  std::sort(est.begin(), est.end());
  j["estimators"] = est;
  return j;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg, int threads) {
  const auto body = make_body(cfg.body);
  const std::uint64_t hash = fnv1a64(experiment_config_json(cfg).dump());

  const bool want_sim = cfg.has_estimator("expectation") ||
                        cfg.has_estimator("variance") || cfg.has_estimator("clt");
  std::vector<CsvRow> rows;
  for (int n : cfg.n_values) {
    CsvRow row;
    row.n = n;
    row.m = cfg.replicates;
    row.seed = cfg.master_seed;
    if (want_sim) {
      const SimulatedSample sim =
          simulate_sample(*body, cfg.r, n, cfg.replicates, cfg.master_seed, threads);
      row.mean_area = sim.summary.mean;
      row.var_area = sim.summary.variance;
      row.stderr_mean = sim.summary.stderr_mean;
      if (cfg.has_estimator("expectation")) {
        row.rescaled_mean = rescale_expectation(*body, sim.summary).rescaled_mean;
      }
      if (cfg.has_estimator("clt")) {
        const StandardizedSample std_sample = standardize(n, sim.areas);
        const CltRow clt = clt_statistics(std_sample, cfg.master_seed);
        row.d_w = clt.d_w;
        row.ks = clt.ks;
        row.skew = clt.skew;
        row.kurt = clt.kurt;
      }
    }
    if (cfg.has_estimator("diffops")) {
      const MomentEstimates mom =
          estimate_b34(*body, cfg.r, n, cfg.replicates, cfg.master_seed, threads);
      row.b3 = mom.b3;
      row.b4 = mom.b4;
    }
    if (cfg.has_estimator("interaction")) {
      row.p_interact = interaction_probability(*body, cfg.r, n, cfg.replicates,
                                               cfg.master_seed, threads)
                           .value;
    }
    rows.push_back(row);
  }

  ExperimentOutput out;
  out.csv = format_csv(rows, hash);
  if (cfg.has_estimator("diffops") && cfg.n_values.size() >= 2) {
    const NormalBoundReport rep =
        normal_bound_report(*body, cfg.r, cfg.n_values, cfg.replicates,
                            cfg.replicates, cfg.master_seed, threads);
    json j;
    j["config_hash"] = hash_hex(hash);
    j["master_seed"] = cfg.master_seed;
    j["b1"] = rep.b1;
    j["b2"] = rep.b2;
    j["n_b3_exponent"] = rep.n_b3_exponent;
    j["sqrt_n_b4_exponent"] = rep.sqrt_n_b4_exponent;
    json rows_json = json::array();
    for (const auto& r : rep.rows) {
      rows_json.push_back({{"n", r.n},
                           {"var_area", r.var_area},
                           {"b3", r.b3},
                           {"b4", r.b4},
                           {"n_b3_f", r.n_b3_f},
                           {"sqrt_n_b4_f", r.sqrt_n_b4_f}});
    }
    j["rows"] = rows_json;
    out.normal_bound_json = j.dump(2) + "\n";
  }
  return out;
}

CltOutput run_clt(const ExperimentConfig& cfg, int threads) {
  const auto body = make_body(cfg.body);
  const std::uint64_t hash = fnv1a64(experiment_config_json(cfg).dump());

  std::vector<CsvRow> rows;
  std::string dump;
  for (int n : cfg.n_values) {
    const SimulatedSample sim =
        simulate_sample(*body, cfg.r, n, cfg.replicates, cfg.master_seed, threads);
    const StandardizedSample std_sample = standardize(n, sim.areas);
    const CltRow clt = clt_statistics(std_sample, cfg.master_seed);
    CsvRow row;
    row.n = n;
    row.m = cfg.replicates;
    row.seed = cfg.master_seed;
    row.mean_area = sim.summary.mean;
    row.var_area = sim.summary.variance;
    row.stderr_mean = sim.summary.stderr_mean;
    row.d_w = clt.d_w;
    row.ks = clt.ks;
    row.skew = clt.skew;
    row.kurt = clt.kurt;
    rows.push_back(row);

    dump += "# n=" + std::to_string(n) + " m=" + std::to_string(cfg.replicates) +
            " master_seed=" + std::to_string(cfg.master_seed) +
            " config_hash=" + hash_hex(hash) + "\n";
    for (double v : std_sample.values) dump += format_double(v) + "\n";
  }
  return {format_csv(rows, hash), std::move(dump)};
}

// ---- caps driver ---------------------------------------------------------------

CapsConfig parse_caps_config(const std::string& text) {
  const json j = parse_json(text);
  CapsConfig cfg;
  try {
    cfg.body = body_from_json(j.at("body"));
    cfg.r = j.at("r").get<double>();
    cfg.t_values = j.at("t_values").get<std::vector<double>>();
    cfg.probes = j.value("probes", std::size_t{10000});
    cfg.samples = j.value("samples", std::size_t{1000000});
    cfg.boundary_points = j.value("boundary_points", 8);
    cfg.directions = j.value("directions", 2048);
    cfg.cap_height = j.value("cap_height", 1e-4);
    cfg.master_seed = j.value("master_seed", std::uint64_t{1});
    if (j.contains("checks")) {
      cfg.checks = j.at("checks").get<std::vector<std::string>>();
    } else {
      cfg.checks = {"cap_limit", "sandwich", "wet", "visibility"};
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field error: ") + e.what());
  }
  for (const auto& c : cfg.checks) {
    if (c != "cap_limit" && c != "sandwich" && c != "wet" && c != "visibility") {
      throw ParseError("config: unknown check \"" + c + "\"");
    }
  }
  if (cfg.t_values.empty()) throw ParseError("config: t_values must be non-empty");
  const auto body = make_body(cfg.body);
  validate_radius(*body, cfg.r);
  for (double t : cfg.t_values) {
    if (!(t > 0.0) || !(t < 0.5 * body->area())) {
      throw ParseError("config: each t must lie in (0, A(K)/2)");
    }
  }
  return cfg;
}

namespace {

json caps_config_json(const CapsConfig& cfg) {
  json j;
  j["body"] = body_to_json(cfg.body);
  j["r"] = cfg.r;
  j["t_values"] = cfg.t_values;
  j["probes"] = cfg.probes;
  j["samples"] = cfg.samples;
  j["boundary_points"] = cfg.boundary_points;
  j["directions"] = cfg.directions;
  j["cap_height"] = cfg.cap_height;
  j["master_seed"] = cfg.master_seed;
  std::vector<std::string> checks = cfg.checks;
  std::sort(checks.begin(), checks.end());
  j["checks"] = checks;
  return j;
}

bool has_check(const CapsConfig& cfg, std::string_view name) {
  return std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end();
}

}  // namespace

std::string run_caps_report(const CapsConfig& cfg, int threads) {
#ifdef _OPENMP
  omp_set_num_threads(resolve_threads(threads));
#else
  (void)threads;
#endif
  const auto body = make_body(cfg.body);
  const std::uint64_t hash = fnv1a64(caps_config_json(cfg).dump());

  json report;
  report["config_hash"] = hash_hex(hash);
  report["master_seed"] = cfg.master_seed;
  report["body"] = body_to_json(cfg.body);
  report["r"] = cfg.r;

  if (has_check(cfg, "cap_limit")) {
    json rows = json::array();
    const double h = cfg.cap_height;
    for (double t0 : {0.0, 0.25}) {
      const double kappa = body->curvature(t0);
      const double limit = (4.0 / 3.0) * std::sqrt(2.0 / (kappa - 1.0 / cfg.r));
      const double area = disc_cap_area(DiscCap{body.get(), t0, h, cfg.r});
      const double ratio = area / (h * std::sqrt(h));
      rows.push_back({{"vertex_param", t0},
                      {"height", h},
                      {"ratio", ratio},
                      {"limit", limit},
                      {"rel_err", std::abs(ratio - limit) / limit}});
    }
    report["cap_limit"] = rows;
  }

  if (has_check(cfg, "sandwich")) {
    json rows = json::array();
    for (std::size_t i = 0; i < cfg.t_values.size(); ++i) {
      RandomStream rng = RandomStream::substream(
          cfg.master_seed, streams::id(streams::kCapsSandwich, i), 0);
      const SandwichReport rep =
          sandwich_check(*body, cfg.t_values[i], cfg.r, cfg.probes, rng);
      rows.push_back({{"t", rep.t},
                      {"probes", rep.probes},
                      {"violations", rep.violations},
                      {"empirical_c0", rep.empirical_c0},
                      {"qualifying_probes", rep.qualifying_probes}});
    }
    report["sandwich"] = rows;
  }

  if (has_check(cfg, "wet")) {
    json rows = json::array();
    for (std::size_t i = 0; i < cfg.t_values.size(); ++i) {
      for (const auto kind : {FloatingBodyKind::linear, FloatingBodyKind::spindle}) {
        RandomStream rng = RandomStream::substream(
            cfg.master_seed, streams::id(streams::kCapsWet, 2 * i + (kind == FloatingBodyKind::spindle)), 0);
        const FloatingBodySpec spec{body.get(), cfg.t_values[i], kind, cfg.r};
        const MonteCarloEstimate est =
            wet_part_area(spec, cfg.samples, rng, cfg.directions);
        rows.push_back({{"t", cfg.t_values[i]},
                        {"kind", kind == FloatingBodyKind::linear ? "linear" : "spindle"},
                        {"estimate", est.value},
                        {"stderr", est.std_error},
                        {"samples", est.samples}});
      }
    }
    report["wet"] = rows;
  }

  if (has_check(cfg, "visibility")) {
    json rows = json::array();
    for (std::size_t i = 0; i < cfg.t_values.size(); ++i) {
      const FloatingBodyApprox obstacle(
          FloatingBodySpec{body.get(), cfg.t_values[i], FloatingBodyKind::spindle,
                           cfg.r},
          cfg.directions);
      for (int zi = 0; zi < cfg.boundary_points; ++zi) {
        const double z = static_cast<double>(zi) / cfg.boundary_points;
        RandomStream rng = RandomStream::substream(
            cfg.master_seed,
            streams::id(streams::kCapsVisibility,
                        i * static_cast<std::size_t>(cfg.boundary_points) +
                            static_cast<std::size_t>(zi)),
            0);
        const VisibilityEstimate est =
            visibility_area(obstacle, z, cfg.samples, rng);
        rows.push_back({{"t", cfg.t_values[i]},
                        {"z_param", z},
                        {"estimate", est.area},
                        {"stderr", est.std_error},
                        {"samples", est.samples},
                        {"wet_hits", est.wet_hits},
                        {"visible_hits", est.visible_hits},
                        {"ratio_to_t", est.area / cfg.t_values[i]}});
      }
    }
    report["visibility"] = rows;
  }

  return report.dump(2) + "\n";
}

std::uint64_t experiment_config_hash(const ExperimentConfig& cfg) {
  return fnv1a64(experiment_config_json(cfg).dump());
}

std::uint64_t caps_config_hash(const CapsConfig& cfg) {
  return fnv1a64(caps_config_json(cfg).dump());
}

std::string manifest_json(std::uint64_t config_hash, std::uint64_t master_seed,
                          std::string_view started_at, std::string_view finished_at,
                          std::span<const std::string> outputs) {
  json j;
  j["config_hash"] = hash_hex(config_hash);
  j["tool_version"] = std::string(kToolVersion);
  j["started_at"] = std::string(started_at);
  j["finished_at"] = std::string(finished_at);
  j["master_seed"] = master_seed;
  j["outputs"] = std::vector<std::string>(outputs.begin(), outputs.end());
  return j.dump(2) + "\n";
}

}  // namespace spindlelab
