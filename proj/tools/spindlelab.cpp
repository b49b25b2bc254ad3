#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spindlelab/engine.hpp"
#include "spindlelab/experiments.hpp"

namespace fs = std::filesystem;
using namespace spindlelab;

namespace {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kGeometryError = 3,
  kDomainError = 4,
  kInternalError = 5,
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<Point> read_point_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read point file: " + path);
  std::vector<Point> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x)) {
      std::string rest;
      if (ls.clear(), ls >> rest) {
        throw ParseError("point file parse error at line " + std::to_string(lineno));
      }
      continue;  // blank or comment-only line
    }
    if (!(ls >> y)) {
      throw ParseError("point file parse error at line " + std::to_string(lineno));
    }
    std::string trailing;
    if (ls >> trailing) {
      throw ParseError("point file parse error at line " + std::to_string(lineno) +
                       ": trailing tokens");
    }
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw ParseError("point file parse error at line " + std::to_string(lineno) +
                       ": non-finite coordinate");
    }
    pts.push_back({x, y});
  }
  return pts;
}

nlohmann::json hull_record(const DiscPolygon& hull) {
  nlohmann::json j;
  j["radius"] = hull.radius();
  nlohmann::json verts = nlohmann::json::array();
  for (const Point& v : hull.vertices()) verts.push_back({{"x", v.x}, {"y", v.y}});
  j["vertices"] = verts;
  nlohmann::json arcs = nlohmann::json::array();
  for (const Arc& a : hull.arcs()) {
    arcs.push_back({{"cx", a.center.x},
                    {"cy", a.center.y},
                    {"t0", a.theta_start},
                    {"t1", a.theta_end}});
  }
  j["arcs"] = arcs;
  j["area"] = hull.area();
  j["vertex_count"] = hull.vertex_count();
  return j;
}

std::string hull_svg(const DiscPolygon& hull) {
  std::ostringstream svg;
  double lox = -1, loy = -1, hix = 1, hiy = 1;
  if (!hull.vertices().empty()) {
    lox = hix = hull.vertices().front().x;
    loy = hiy = hull.vertices().front().y;
    for (const Arc& a : hull.arcs()) {
      lox = std::min(lox, a.center.x - a.radius);
      hix = std::max(hix, a.center.x + a.radius);
      loy = std::min(loy, a.center.y - a.radius);
      hiy = std::max(hiy, a.center.y + a.radius);
    }
  }
  const double pad = 0.05 * std::max(hix - lox, hiy - loy) + 1e-3;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << (lox - pad) << " "
      << (loy - pad) << " " << (hix - lox + 2 * pad) << " " << (hiy - loy + 2 * pad)
      << "\">\n";
  if (!hull.arcs().empty()) {
    std::ostringstream path;
    const Point start = hull.arcs().front().start();
    path << "M " << start.x << " " << start.y;
    for (const Arc& a : hull.arcs()) {
      const Point e = a.end();
      const int large = a.sweep() > 3.14159265358979 ? 1 : 0;
      path << " A " << a.radius << " " << a.radius << " 0 " << large << " 1 " << e.x
           << " " << e.y;
    }
    path << " Z";
    svg << "  <path d=\"" << path.str()
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\""
        << 0.005 * std::max(hix - lox, hiy - loy) << "\"/>\n";
  } else if (!hull.vertices().empty()) {
    svg << "  <circle cx=\"" << hull.vertices().front().x << "\" cy=\""
        << hull.vertices().front().y << "\" r=\"" << pad * 0.2 << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file")->required();
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "master seed override")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--threads", flags.threads, "worker threads (0 = auto)");
  cmd->add_flag("--quiet", flags.quiet, "suppress progress output");
}

void apply_threads(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(resolve_threads(threads));
#else
  (void)threads;
#endif
}

void write_outputs(const CommonFlags& flags, std::uint64_t hash,
                   std::uint64_t master_seed, const std::string& started,
                   const std::vector<std::pair<std::string, std::string>>& files) {
  fs::create_directories(flags.out_dir);
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    const std::string path = (fs::path(flags.out_dir) / name).string();
    write_file_atomic(path, content);
    names.push_back(path);
    if (!flags.quiet) std::cout << "wrote " << path << "\n";
  }
  const std::string manifest =
      manifest_json(hash, master_seed, started, now_iso8601(), names);
  write_file_atomic((fs::path(flags.out_dir) / "manifest.json").string(), manifest);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spindle-convex hull experiments"};
  app.require_subcommand(1);

  // hull
  auto* hull_cmd = app.add_subcommand("hull", "hull of a point file");
  std::string hull_input, hull_out = "hull.json", hull_svg_path;
  double hull_r = 1.0;
  hull_cmd->add_option("--input", hull_input, "point file, one \"x y\" per line")
      ->required();
  hull_cmd->add_option("--r", hull_r, "arc radius")->required();
  hull_cmd->add_option("--out", hull_out, "output record path");
  hull_cmd->add_option("--svg", hull_svg_path, "optional SVG outline path");

  // constant
  auto* const_cmd = app.add_subcommand("constant", "expectation-limit constant");
  std::string const_body = "disc";
  double const_a = 1.0, const_b = 1.0, const_r = 2.0;
  const_cmd->add_option("--body", const_body, "disc | ellipse");
  const_cmd->add_option("--a", const_a, "ellipse semi-axis a");
  const_cmd->add_option("--b", const_b, "ellipse semi-axis b");
  const_cmd->add_option("--r", const_r, "arc radius")->required();

  CommonFlags exp_flags, clt_flags, caps_flags;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo experiment -> CSV");
  add_common(exp_cmd, exp_flags);
  auto* clt_cmd = app.add_subcommand("clt", "normality statistics -> CSV + dump");
  add_common(clt_cmd, clt_flags);
  auto* caps_cmd = app.add_subcommand("caps", "cap/floating-body checks -> report");
  add_common(caps_cmd, caps_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (hull_cmd->parsed()) {
      const std::vector<Point> pts = read_point_file(hull_input);
      const DiscPolygon hull = spindle_hull(pts, hull_r);
      write_file_atomic(hull_out, hull_record(hull).dump(2) + "\n");
      if (!hull_svg_path.empty()) write_file_atomic(hull_svg_path, hull_svg(hull));
      return kOk;
    }

    if (const_cmd->parsed()) {
      BodyConfig bc;
      bc.kind = const_body;
      bc.a = const_a;
      bc.b = const_b;
      const auto body = make_body(bc);
      const double c = expected_area_constant(*body, const_r);
      std::printf("%.12g\n", c);
      return kOk;
    }

    if (exp_cmd->parsed()) {
      apply_threads(exp_flags.threads);
      const std::string started = now_iso8601();
      ExperimentConfig cfg = parse_experiment_config(read_file(exp_flags.config_path));
      if (exp_flags.seed_set) cfg.master_seed = exp_flags.seed;
      const ExperimentOutput out = run_experiment(cfg, exp_flags.threads);
      std::vector<std::pair<std::string, std::string>> files{
          {"experiment.csv", out.csv}};
      if (out.normal_bound_json) {
        files.push_back({"normal_bound.json", *out.normal_bound_json});
      }
      write_outputs(exp_flags, experiment_config_hash(cfg), cfg.master_seed, started,
                    files);
      return kOk;
    }

    if (clt_cmd->parsed()) {
      apply_threads(clt_flags.threads);
      const std::string started = now_iso8601();
      ExperimentConfig cfg = parse_experiment_config(read_file(clt_flags.config_path));
      if (clt_flags.seed_set) cfg.master_seed = clt_flags.seed;
      const CltOutput out = run_clt(cfg, clt_flags.threads);
      write_outputs(clt_flags, experiment_config_hash(cfg), cfg.master_seed, started,
                    {{"clt.csv", out.csv}, {"clt_samples.txt", out.sample_dump}});
      return kOk;
    }

    if (caps_cmd->parsed()) {
      apply_threads(caps_flags.threads);
      const std::string started = now_iso8601();
      CapsConfig cfg = parse_caps_config(read_file(caps_flags.config_path));
      if (caps_flags.seed_set) cfg.master_seed = caps_flags.seed;
      const std::string report = run_caps_report(cfg, caps_flags.threads);
      write_outputs(caps_flags, caps_config_hash(cfg), cfg.master_seed, started,
                    {{"caps_report.json", report}});
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGeometryError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kOk;
}
