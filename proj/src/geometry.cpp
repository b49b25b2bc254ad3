#include "spindlelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spindlelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

}  // namespace

bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double circular_segment_area(double radius, double sweep) {
  // sweep - sin(sweep) cancels for small sweeps; switch to the series there.
  double g;
  if (sweep < 1e-3) {
    const double s2 = sweep * sweep;
    g = sweep * s2 / 6.0 * (1.0 - s2 / 20.0 * (1.0 - s2 / 42.0));
  } else {
    g = sweep - std::sin(sweep);
  }
  return 0.5 * radius * radius * g;
}

std::pair<Point, Point> arc_centers(Point a, Point b, double r) {
  if (!is_finite(a) || !is_finite(b) || !(r > 0.0)) {
    throw GeometryError("arc_centers: non-finite input or non-positive radius");
  }
  const double d = dist(a, b);
  if (d <= kDedupEps) throw GeometryError("arc_centers: coincident chord endpoints");
  if (d >= 2.0 * r) throw GeometryError("arc_centers: chord length >= 2r");

  const Point mid = 0.5 * (a + b);
  const Point dir = (1.0 / d) * (b - a);
  const double q = std::sqrt(std::max(0.0, r * r - 0.25 * d * d));
  const Point left = mid + q * perp(dir);
  const Point right = mid - q * perp(dir);
  return {left, right};
}

DiscPolygon DiscPolygon::empty_set(double radius) {
  DiscPolygon p;
  p.radius_ = radius;
  return p;
}

DiscPolygon DiscPolygon::single_point(Point pt, double radius) {
  DiscPolygon p;
  p.radius_ = radius;
  p.vertices_ = {pt};
  return p;
}

DiscPolygon DiscPolygon::full_disc(Point center, double radius, Point boundary_vertex) {
  DiscPolygon p;
  p.radius_ = radius;
  p.vertices_ = {boundary_vertex};
  const double t0 = std::atan2(boundary_vertex.y - center.y, boundary_vertex.x - center.x);
  p.arcs_ = {Arc{center, radius, t0, t0 + kTwoPi}};
  return p;
}

DiscPolygon DiscPolygon::from_ccw_vertices(std::vector<Point> vertices, double radius) {
  DiscPolygon p;
  p.radius_ = radius;
  p.vertices_ = std::move(vertices);
  const std::size_t k = p.vertices_.size();
  if (k < 2) return p;
  p.arcs_.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Point a = p.vertices_[i];
    const Point b = p.vertices_[(i + 1) % k];
    const Point c = arc_centers(a, b, radius).first;  // interior side of a CCW edge
    const double ta = std::atan2(a.y - c.y, a.x - c.x);
    double sweep = wrap_angle(std::atan2(b.y - c.y, b.x - c.x) - ta);
    p.arcs_.push_back(Arc{c, radius, ta, ta + sweep});
  }
  return p;
}

double DiscPolygon::area() const {
  double a = polygon_area(vertices_);
  for (const Arc& arc : arcs_) a += circular_segment_area(arc.radius, arc.sweep());
  return a;
}

bool DiscPolygon::contains(Point q, double eps) const {
  if (vertices_.empty()) return false;
  if (arcs_.empty()) return dist(q, vertices_.front()) <= eps;
  for (const Arc& arc : arcs_) {
    if (dist(q, arc.center) > arc.radius + eps) return false;
  }
  return true;
}

void DiscPolygon::validate() const {
  const std::size_t k = vertices_.size();
  for (const Point& v : vertices_) {
    if (!is_finite(v)) throw InvariantError("DiscPolygon: non-finite vertex");
  }
  if (k >= 2 && arcs_.size() != k) {
    // exception: the whole-disc form is one vertex + one full arc
    throw InvariantError("DiscPolygon: arc count does not match vertex count");
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (dist(vertices_[i], vertices_[j]) > 2.0 * radius_ + kGeomEps) {
        throw InvariantError("DiscPolygon: vertex pair farther than 2r apart");
      }
    }
  }
  for (const Arc& arc : arcs_) {
    if (std::abs(dist(arc.start(), arc.center) - arc.radius) > 1e-9 ||
        std::abs(dist(arc.end(), arc.center) - arc.radius) > 1e-9) {
      throw InvariantError("DiscPolygon: arc endpoints off the circle");
    }
    for (const Point& v : vertices_) {
      if (dist(v, arc.center) > arc.radius + 1e-9) {
        throw InvariantError("DiscPolygon: vertex outside an arc's disc");
      }
    }
  }
}

DiscPolygon spindle(Point a, Point b, double r) {
  if (!(r > 0.0)) throw GeometryError("spindle: non-positive radius");
  const double d = dist(a, b);
  if (d > 2.0 * r + kGeomEps) throw GeometryError("spindle: |a-b| > 2r, not representable");
  if (d <= kDedupEps) return DiscPolygon::single_point(a, r);
  if (d >= 2.0 * r - kGeomEps) {
    return DiscPolygon::full_disc(0.5 * (a + b), r, a);
  }
  return DiscPolygon::from_ccw_vertices({a, b}, r);
}

std::vector<Point> convex_hull(std::vector<Point> points, double eps) {
  std::sort(points.begin(), points.end(), [](Point p, Point q) {
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](Point p, Point q) {
                             return std::abs(p.x - q.x) <= kDedupEps &&
                                    std::abs(p.y - q.y) <= kDedupEps;
                           }),
               points.end());
  const std::size_t n = points.size();
  if (n <= 2) return points;

  std::vector<Point> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= eps) --k;
    hull[k++] = points[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= eps) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  return hull;
}

double polygon_area(std::span<const Point> v) {
  const std::size_t k = v.size();
  if (k < 3) return 0.0;
  double a = 0.0;
  for (std::size_t i = 0; i < k; ++i) a += cross(v[i], v[(i + 1) % k]);
  return 0.5 * a;
}

namespace {

// True iff b lies strictly inside the spindle of a and c (removable vertex).
bool inside_spindle_strict(Point b, Point a, Point c, double r) {
  const double d = dist(a, c);
  if (d >= 2.0 * r - kGeomEps) {
    return dist(b, 0.5 * (a + c)) < r - kGeomEps;
  }
  const auto [c1, c2] = arc_centers(a, c, r);
  return dist(b, c1) < r - kGeomEps && dist(b, c2) < r - kGeomEps;
}

}  // namespace

DiscPolygon spindle_hull(std::span<const Point> points, double r) {
  if (!(r > 0.0)) throw GeometryError("spindle_hull: non-positive radius");
  for (const Point& p : points) {
    if (!is_finite(p)) throw GeometryError("spindle_hull: non-finite point");
  }
  std::vector<Point> hull = convex_hull({points.begin(), points.end()});

  // Hull vertices realize the diameter of the input set.
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      if (dist(hull[i], hull[j]) > 2.0 * r + kGeomEps) {
        throw GeometryError("spindle_hull: pairwise distance exceeds 2r");
      }
    }
  }

  if (hull.empty()) return DiscPolygon::empty_set(r);
  if (hull.size() == 1) return DiscPolygon::single_point(hull[0], r);

  // Drop every vertex contained in the spindle of its current neighbours;
  // vertex removals only ever expose more removals, so iterate to a fixed
  // point around the cycle.
  bool removed = true;
  while (removed && hull.size() > 2) {
    removed = false;
    for (std::size_t i = 0; i < hull.size() && hull.size() > 2;) {
      const std::size_t k = hull.size();
      const Point a = hull[(i + k - 1) % k];
      const Point b = hull[i];
      const Point c = hull[(i + 1) % k];
      if (inside_spindle_strict(b, a, c, r)) {
        hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
      } else {
        ++i;
      }
    }
  }

  if (hull.size() == 2) return spindle(hull[0], hull[1], r);
  return DiscPolygon::from_ccw_vertices(std::move(hull), r);
}

namespace {

// Closed angular subset of a circle, kept as disjoint ordered intervals in
// [0, 2pi); degenerate single-angle intervals are retained.
class AngleSet {
 public:
  AngleSet() : intervals_{{0.0, kTwoPi}} {}

  bool empty() const { return intervals_.empty(); }
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

  // Intersect with {phi : |phi - center| <= halfwidth (mod 2pi)}.
  void clip(double center, double halfwidth) {
    if (halfwidth >= std::numbers::pi) return;  // whole circle
    const double lo = wrap_angle(center - halfwidth);
    const double hi = lo + 2.0 * halfwidth;
    std::vector<std::pair<double, double>> window;
    if (hi <= kTwoPi) {
      window.push_back({lo, hi});
    } else {
      window.push_back({lo, kTwoPi});
      window.push_back({0.0, hi - kTwoPi});
    }
    std::vector<std::pair<double, double>> out;
    for (const auto& [a, b] : intervals_) {
      for (const auto& [wa, wb] : window) {
        const double s = std::max(a, wa);
        const double e = std::min(b, wb);
        if (s <= e) out.push_back({s, e});
      }
    }
    intervals_ = std::move(out);
  }

 private:
  std::vector<std::pair<double, double>> intervals_;
};

double max_dist_to_arc(Point q, Point center, double r, double a, double b,
                       int resolution) {
  const Point w = center - q;
  const double wn = norm(w);
  double best;
  if (wn <= kDedupEps) {
    best = r;
  } else {
    best = std::max(dist(q, Point{center.x + r * std::cos(a), center.y + r * std::sin(a)}),
                    dist(q, Point{center.x + r * std::cos(b), center.y + r * std::sin(b)}));
    const double away = std::atan2(w.y, w.x);  // farthest point of the full circle
    const double rel = wrap_angle(away - a);
    if (rel <= b - a) best = wn + r;
  }
  // Sampled cross-check; the analytic maximum must dominate every sample.
  if (resolution > 0) {
    for (int s = 0; s <= resolution; ++s) {
      const double phi = a + (b - a) * (static_cast<double>(s) / resolution);
      const double d = dist(q, Point{center.x + r * std::cos(phi), center.y + r * std::sin(phi)});
      if (d > best + 1e-9) {
        throw InvariantError("hull_membership_oracle: sampled distance exceeds analytic maximum");
      }
    }
  }
  return best;
}

}  // namespace

bool hull_membership_oracle(std::span<const Point> points, double r, Point q,
                            int resolution) {
  if (points.empty()) return false;

  // Admissible centers C = intersection of disc(x_i, r); q is in the hull
  // iff every point of C is within r of q, i.e. max_{p in bd C} |q - p| <= r.
  double max_dist = 0.0;
  bool any_boundary = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    AngleSet allowed;  // portion of circle(x_i, r) inside every other disc
    for (std::size_t j = 0; j < points.size() && !allowed.empty(); ++j) {
      if (j == i) continue;
      const double d = dist(points[i], points[j]);
      if (d <= kDedupEps) continue;
      if (d > 2.0 * r + kGeomEps) {
        throw GeometryError("hull_membership_oracle: pairwise distance exceeds 2r");
      }
      const Point to_j = points[j] - points[i];
      const double cosw = std::min(1.0, d / (2.0 * r));
      allowed.clip(std::atan2(to_j.y, to_j.x), std::acos(cosw));
    }
    for (const auto& [a, b] : allowed.intervals()) {
      any_boundary = true;
      max_dist = std::max(max_dist, max_dist_to_arc(q, points[i], r, a, b, resolution));
    }
  }
  if (!any_boundary) {
    throw InvariantError("hull_membership_oracle: empty center region");
  }
  return max_dist <= r + kGeomEps;
}

}  // namespace spindlelab
