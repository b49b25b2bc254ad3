#include "spindlelab/caps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spindlelab/quadrature.hpp"

namespace spindlelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_unit(double t) { return t - std::floor(t); }

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

Point unit(Point p) {
  const double n = norm(p);
  return {p.x / n, p.y / n};
}

// Root of g on [lo, hi], g(lo) and g(hi) of opposite sign.
template <typename G>
double bisect(G&& g, double lo, double hi, int iters = 52) {
  double glo = g(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <typename F>
double golden_min(F&& f, double lo, double hi, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// Green's theorem along the boundary piece [t_lo, t_hi] (unwrapped params)
// with the origin shifted to `origin` to avoid cancellation on small caps:
// 1/2 * integral of cross(gamma - origin, gamma') dt.
double green_boundary_piece(const ConvexBody& body, double t_lo, double t_hi,
                            Point origin) {
  return 0.5 * integrate(
                   [&](double t) {
                     const double w = wrap_unit(t);
                     return cross(body.boundary(w) - origin,
                                  body.boundary_derivative(w));
                   },
                   t_lo, t_hi, 1e-12);
}

struct CapCut {
  double area = 0.0;
  bool proper = false;  // the cutting circle crosses bd K
};

// A(K \ disc(p, r)) when a parameter t_out with gamma(t_out) outside the
// open disc is already known. Expands around t_out to bracket the two
// boundary crossings, then integrates the cap boundary.
CapCut disc_cap_area_with_hint(const ConvexBody& body, Point p, double r,
                               double t_out) {
  if (auto closed = body.disc_cap_area_closed_form(p, r)) {
    return {std::max(0.0, *closed), true};
  }
  const auto f = [&](double t) { return dist(body.boundary(wrap_unit(t)), p) - r; };

  // crossing on each side of t_out, found by geometrically expanding steps
  const auto crossing = [&](double sign) -> double {
    double step = 1.0 / 512.0;
    double prev = t_out;
    while (step <= 0.5) {
      const double cand = t_out + sign * step;
      if (f(cand) < 0.0) return bisect(f, prev, cand);
      prev = cand;
      step *= 1.6;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double ta = crossing(-1.0);
  const double tb = crossing(+1.0);
  if (std::isnan(ta) || std::isnan(tb)) {
    // No crossing: either the disc swallowed K, sits inside K, or misses it.
    const double a = body.area();
    if (f(t_out) <= 0.0) return {0.0, false};
    if (body.contains(p)) return {a - std::numbers::pi * r * r, false};
    return {a, false};
  }

  const Point x0 = body.boundary(wrap_unit(t_out));
  const Point ea = body.boundary(wrap_unit(ta));
  const Point eb = body.boundary(wrap_unit(tb));

  const double curve = green_boundary_piece(body, ta, tb, x0);
  const double chord = 0.5 * cross(eb - x0, ea - x0);

  // Subtract the segment between the chord and the cutting arc on the cap side.
  const double phi_a = std::atan2(ea.y - p.y, ea.x - p.x);
  const double phi_b = std::atan2(eb.y - p.y, eb.x - p.x);
  const double d = wrap_angle(phi_a - phi_b);
  const double minor = std::min(d, kTwoPi - d);
  const Point chord_mid = 0.5 * (ea + eb);
  double sweep = minor;
  if (dist(chord_mid, p) > kGeomEps) {
    const Point m = p + r * unit(chord_mid - p);  // midpoint of the minor arc
    if (dot(m - chord_mid, x0 - chord_mid) < 0.0) sweep = kTwoPi - minor;
  }
  const double area = curve + chord - circular_segment_area(r, sweep);
  return {std::max(0.0, area), true};
}

}  // namespace

double halfplane_cap_area(const ConvexBody& body, Point u, double level) {
  if (auto closed = body.halfplane_cap_area_closed_form(u, level)) {
    return std::max(0.0, *closed);
  }
  const double tu = body.support_param(u);
  const double smax = dot(body.boundary(tu), u);
  if (level >= smax) return 0.0;
  double topp = body.support_param({-u.x, -u.y});
  const double smin = dot(body.boundary(wrap_unit(topp)), u);
  if (level <= smin) return body.area();

  // unwrap the opposite support param into (tu - 1, tu)
  topp -= std::floor(topp - (tu - 1.0));
  const auto g = [&](double t) {
    return dot(body.boundary(wrap_unit(t)), u) - level;
  };
  const double t1 = bisect(g, topp, tu);
  const double t2 = bisect(g, topp + 1.0, tu);

  const Point x0 = body.boundary(wrap_unit(tu));
  const double curve = green_boundary_piece(body, t1, t2, x0);
  const double chord = 0.5 * cross(body.boundary(wrap_unit(t2)) - x0,
                                   body.boundary(wrap_unit(t1)) - x0);
  return std::max(0.0, curve + chord);
}

double disc_cap_area_by_center(const ConvexBody& body, Point center, double r,
                               bool* proper_cap) {
  // Locate a boundary point outside the open disc (the deepest cap point).
  // The scan resolves caps wider than one grid cell; cutting circles in the
  // r > r_M regime cross the boundary at most twice, so this is the cap.
  const int n = 256;
  double t_out = 0.0;
  double best = -kInf;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double f = dist(body.boundary(t), center) - r;
    if (f > best) {
      best = f;
      t_out = t;
    }
  }
  if (best <= 0.0) {
    if (proper_cap) *proper_cap = false;
    return 0.0;
  }
  const CapCut cut = disc_cap_area_with_hint(body, center, r, t_out);
  if (proper_cap) *proper_cap = cut.proper;
  return cut.area;
}

double linear_cap_area(const LinearCap& cap) {
  if (cap.height < 0.0) throw DomainError("linear_cap_area: negative height");
  const ConvexBody& body = *cap.body;
  const Point u = body.outer_normal(cap.vertex_param);
  const double level = dot(body.boundary(cap.vertex_param), u) - cap.height;
  return halfplane_cap_area(body, u, level);
}

double disc_cap_area(const DiscCap& cap) {
  if (cap.height < 0.0) throw DomainError("disc_cap_area: negative height");
  const ConvexBody& body = *cap.body;
  const Point x0 = body.boundary(cap.vertex_param);
  const Point u = body.outer_normal(cap.vertex_param);
  const Point p = x0 - (cap.radius + cap.height) * u;
  if (cap.height == 0.0) return 0.0;
  const CapCut cut = disc_cap_area_with_hint(body, p, cap.radius, cap.vertex_param);
  if (!cut.proper) {
    throw DomainError("disc_cap_area: cutting circle does not cross the boundary");
  }
  return cut.area;
}

namespace {

// Coarse cyclic grid scan followed by golden-section refinement of the best
// few local minima. Deterministic for a fixed grid size.
template <typename F>
double minimize_cyclic(F&& objective, int grid, double domain, double tol) {
  std::vector<double> val(grid);
  for (int i = 0; i < grid; ++i) {
    val[i] = objective(domain * static_cast<double>(i) / grid);
  }
  std::vector<int> minima;
  for (int i = 0; i < grid; ++i) {
    const double prev = val[(i + grid - 1) % grid];
    const double next = val[(i + 1) % grid];
    if (val[i] <= prev && val[i] <= next && std::isfinite(val[i])) {
      minima.push_back(i);
    }
  }
  std::sort(minima.begin(), minima.end(),
            [&](int a, int b) { return val[a] < val[b]; });
  if (minima.size() > 3) minima.resize(3);

  double best = kInf;
  for (int i = 0; i < grid; ++i) best = std::min(best, val[i]);
  const double step = domain / grid;
  for (int idx : minima) {
    const double center = domain * static_cast<double>(idx) / grid;
    const double t = golden_min(objective, center - step, center + step, tol);
    best = std::min(best, objective(t));
  }
  return best;
}

}  // namespace

double min_cap_area(const ConvexBody& body, Point x) {
  if (!body.contains(x)) throw DomainError("min_cap_area: point outside the body");
  const auto objective = [&](double alpha) {
    const Point u{std::cos(alpha), std::sin(alpha)};
    return halfplane_cap_area(body, u, dot(x, u));
  };
  return minimize_cyclic(objective, 256, kTwoPi, 1e-8);
}

double min_disc_cap_area(const ConvexBody& body, Point x, double r) {
  if (!body.contains(x)) throw DomainError("min_disc_cap_area: point outside the body");
  const auto objective = [&](double tv) -> double {
    const double t = wrap_unit(tv);
    const Point x0 = body.boundary(t);
    const Point u = body.outer_normal(t);
    const Point w = x0 - x;
    const double pw = dot(u, w);
    const double disc = pw * pw - norm2(w) + r * r;
    if (disc < 0.0) return kInf;
    const double root = std::sqrt(disc);
    // smaller admissible center distance gives the shallower (smaller) cap
    double s = pw - root;
    if (s < r) s = pw + root;
    if (s < r) return kInf;
    const Point p = x0 - s * u;
    return disc_cap_area_with_hint(body, p, r, t).area;
  };
  return minimize_cyclic(objective, 256, 1.0, 1e-9);
}

bool floating_body_contains(const FloatingBodySpec& spec, Point x) {
  if (!(spec.t > 0.0) || !(spec.t < 0.5 * spec.body->area())) {
    throw DomainError("floating body parameter t must be in (0, A(K)/2)");
  }
  if (spec.kind == FloatingBodyKind::linear) {
    return min_cap_area(*spec.body, x) >= spec.t;
  }
  return min_disc_cap_area(*spec.body, x, spec.radius) >= spec.t;
}

FloatingBodyApprox::FloatingBodyApprox(FloatingBodySpec spec, int directions)
    : spec_(spec) {
  const ConvexBody& body = *spec_.body;
  if (!(spec_.t > 0.0) || !(spec_.t < 0.5 * body.area())) {
    throw DomainError("floating body parameter t must be in (0, A(K)/2)");
  }
  if (spec_.kind == FloatingBodyKind::spindle) {
    const CurvatureSummary cs = curvature_summary(body);
    if (!(spec_.radius > cs.r_M)) {
      throw DomainError("spindle floating body requires r > r_M");
    }
  }
  poly_.resize(static_cast<std::size_t>(directions));

#pragma omp parallel for schedule(static)
  for (int j = 0; j < directions; ++j) {
    const double t = static_cast<double>(j) / directions;
    const Point x0 = body.boundary(t);
    const Point u = body.outer_normal(t);
    double h;
    if (spec_.kind == FloatingBodyKind::linear) {
      const double smax = dot(x0, u);
      const double smin =
          dot(body.boundary(body.support_param({-u.x, -u.y})), u);
      h = bisect(
          [&](double hh) {
            return halfplane_cap_area(body, u, smax - hh) - spec_.t;
          },
          0.0, smax - smin, 46);
    } else {
      const auto cap_area = [&](double hh) {
        const Point p = x0 - (spec_.radius + hh) * u;
        return disc_cap_area_with_hint(body, p, spec_.radius, t).area;
      };
      double hi = 0.25 * std::cbrt(spec_.t * spec_.t);
      while (cap_area(hi) < spec_.t) hi *= 2.0;
      h = bisect([&](double hh) { return cap_area(hh) - spec_.t; }, 0.0, hi, 46);
    }
    poly_[static_cast<std::size_t>(j)] = x0 - h * u;
  }

  centroid_ = {0.0, 0.0};
  for (const Point& p : poly_) centroid_ = centroid_ + p;
  centroid_ = (1.0 / static_cast<double>(poly_.size())) * centroid_;

  angles_.resize(poly_.size());
  for (std::size_t i = 0; i < poly_.size(); ++i) {
    const Point d = poly_[i] - centroid_;
    angles_[i] = std::atan2(d.y, d.x);
  }
  // rotate so the angle sequence starts at its minimum, then demand monotonicity
  const std::size_t pivot = static_cast<std::size_t>(
      std::min_element(angles_.begin(), angles_.end()) - angles_.begin());
  std::rotate(poly_.begin(), poly_.begin() + static_cast<std::ptrdiff_t>(pivot),
              poly_.end());
  std::rotate(angles_.begin(), angles_.begin() + static_cast<std::ptrdiff_t>(pivot),
              angles_.end());
  if (!std::is_sorted(angles_.begin(), angles_.end())) {
    throw InvariantError("FloatingBodyApprox: boundary polyline is not star-shaped");
  }
}

bool FloatingBodyApprox::contains(Point p, double margin) const {
  const Point d = p - centroid_;
  const double a = std::atan2(d.y, d.x);
  const std::size_t n = poly_.size();
  const auto it = std::upper_bound(angles_.begin(), angles_.end(), a);
  const std::size_t i =
      (it == angles_.begin() || it == angles_.end())
          ? n - 1
          : static_cast<std::size_t>(it - angles_.begin()) - 1;
  const Point e = poly_[(i + 1) % n] - poly_[i];
  return cross(e, p - poly_[i]) >= margin * norm(e);
}

MonteCarloEstimate wet_part_area(const FloatingBodyApprox& fb, std::size_t samples,
                                 RandomStream& rng) {
  const ConvexBody& body = *fb.spec().body;
  constexpr std::size_t kBatch = 65536;
  std::vector<Point> pts(kBatch);
  std::size_t wet = 0;
  for (std::size_t done = 0; done < samples;) {
    const std::size_t b = std::min(kBatch, samples - done);
    for (std::size_t i = 0; i < b; ++i) pts[i] = sample_uniform(body, rng);
    long long hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (long long i = 0; i < static_cast<long long>(b); ++i) {
      if (!fb.contains(pts[static_cast<std::size_t>(i)])) ++hits;
    }
    wet += static_cast<std::size_t>(hits);
    done += b;
  }
  const double p = static_cast<double>(wet) / static_cast<double>(samples);
  const double a = body.area();
  return {a * p, a * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)),
          samples};
}

MonteCarloEstimate wet_part_area(const FloatingBodySpec& spec, std::size_t samples,
                                 RandomStream& rng, int directions) {
  const FloatingBodyApprox fb(spec, directions);
  return wet_part_area(fb, samples, rng);
}

SandwichReport sandwich_check(const ConvexBody& body, double t, double r,
                              std::size_t probes, RandomStream& rng) {
  // Half the probes are uniform in K; the other half concentrate in the
  // shallow boundary band (cap heights up to the level-3t cut) where the
  // floating-body boundaries live and the c0 minimum is attained.
  std::vector<Point> pts(probes);
  for (std::size_t k = 0; k < probes; ++k) {
    if (k % 2 == 0) {
      pts[k] = sample_uniform(body, rng);
      continue;
    }
    for (;;) {
      const double tb = rng.next_double();
      const double kappa = body.curvature(tb);
      const double band =
          std::pow(3.0 * t / ((4.0 / 3.0) * std::sqrt(2.0 / kappa)), 2.0 / 3.0);
      const Point x =
          body.boundary(tb) - (rng.next_double() * band) * body.outer_normal(tb);
      if (body.contains(x)) {
        pts[k] = x;
        break;
      }
    }
  }

  long long violations = 0;
  long long qualifying = 0;
  double c0 = kInf;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : violations, qualifying) \
    reduction(min : c0)
  for (long long i = 0; i < static_cast<long long>(probes); ++i) {
    const Point x = pts[static_cast<std::size_t>(i)];
    const double v = min_cap_area(body, x);
    const double vr = min_disc_cap_area(body, x, r);
    if (v >= t && vr < t) ++violations;
    if (vr >= t) {
      ++qualifying;
      c0 = std::min(c0, v / t);
    }
  }
  SandwichReport rep;
  rep.t = t;
  rep.r = r;
  rep.probes = probes;
  rep.violations = static_cast<std::size_t>(violations);
  rep.qualifying_probes = static_cast<std::size_t>(qualifying);
  rep.empirical_c0 = qualifying > 0 ? c0 : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

namespace {

// True when at least one of the two shorter radius-r arcs from x to z stays
// clear of the obstacle interior.
bool arc_visible(const FloatingBodyApprox& obstacle, Point x, Point z, double r,
                 int arc_probes) {
  const auto [c1, c2] = arc_centers(x, z, r);
  for (const Point& c : {c1, c2}) {
    const double phi_x = std::atan2(x.y - c.y, x.x - c.x);
    const double phi_z = std::atan2(z.y - c.y, z.x - c.x);
    const double delta = std::remainder(phi_z - phi_x, kTwoPi);
    bool blocked = false;
    for (int k = 1; k <= arc_probes && !blocked; ++k) {
      const double phi = phi_x + delta * (static_cast<double>(k) / (arc_probes + 1));
      const Point q{c.x + r * std::cos(phi), c.y + r * std::sin(phi)};
      if (obstacle.contains(q, 1e-12)) blocked = true;
    }
    if (!blocked) return true;
  }
  return false;
}

}  // namespace

VisibilityEstimate visibility_area(const FloatingBodyApprox& obstacle, double z_param,
                                   std::size_t samples, RandomStream& rng,
                                   int arc_probes) {
  const ConvexBody& body = *obstacle.spec().body;
  const double r = obstacle.spec().radius;
  const Point z = body.boundary(wrap_unit(z_param));

  constexpr std::size_t kBatch = 65536;
  std::vector<Point> pts(kBatch);
  long long wet = 0;
  long long visible = 0;
  for (std::size_t done = 0; done < samples;) {
    const std::size_t b = std::min(kBatch, samples - done);
    for (std::size_t i = 0; i < b; ++i) pts[i] = sample_uniform(body, rng);
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : wet, visible)
    for (long long i = 0; i < static_cast<long long>(b); ++i) {
      const Point x = pts[static_cast<std::size_t>(i)];
      if (obstacle.contains(x)) continue;
      ++wet;
      if (dist(x, z) <= kDedupEps) {
        ++visible;
      } else if (arc_visible(obstacle, x, z, r, arc_probes)) {
        ++visible;
      }
    }
    done += b;
  }
  const double p = static_cast<double>(visible) / static_cast<double>(samples);
  const double a = body.area();
  VisibilityEstimate est;
  est.area = a * p;
  est.std_error = a * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  est.samples = samples;
  est.wet_hits = static_cast<std::size_t>(wet);
  est.visible_hits = static_cast<std::size_t>(visible);
  return est;
}

VisibilityEstimate visibility_area(const ConvexBody& body, double z_param, double t,
                                   double r, std::size_t samples, RandomStream& rng,
                                   int directions, int arc_probes) {
  const FloatingBodyApprox obstacle(
      FloatingBodySpec{&body, t, FloatingBodyKind::spindle, r}, directions);
  return visibility_area(obstacle, z_param, samples, rng, arc_probes);
}

}  // namespace spindlelab
