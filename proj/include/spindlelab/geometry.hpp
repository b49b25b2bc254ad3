#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spindlelab {

// Absolute tolerance for geometric comparison predicates, in length units.
inline constexpr double kGeomEps = 1e-10;
// Points closer than this are merged before hulling.
inline constexpr double kDedupEps = 1e-12;

// Input is geometrically invalid for the requested construction (exit code 3).
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters outside the supported regime, e.g. r <= r_M (exit code 4).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed (exit code 5).
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point a) { return a.x * a.x + a.y * a.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point perp(Point a) { return {-a.y, a.x}; }  // rotate +90 degrees

bool is_finite(Point p);

// Circular arc, swept counterclockwise from theta_start to theta_end.
// Sweep is normalized into (0, 2pi]; hull-boundary arcs have sweep < pi.
struct Arc {
  Point center;
  double radius = 0.0;
  double theta_start = 0.0;
  double theta_end = 0.0;

  double sweep() const { return theta_end - theta_start; }
  Point at(double theta) const {
    return {center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)};
  }
  Point start() const { return at(theta_start); }
  Point end() const { return at(theta_end); }
};

// Area between a circular arc and its chord, radius^2 * (sweep - sin sweep) / 2.
double circular_segment_area(double radius, double sweep);

// Convex region bounded by circular arcs of a fixed radius: the intersection
// of finitely many closed discs of that radius. vertices are CCW; arcs[i]
// joins vertices[i] to vertices[(i+1) % k]. Degenerate forms: no vertices
// (empty set), one vertex with no arcs (a single point), one vertex with a
// full-sweep arc (a whole disc), two vertices (a lens).
class DiscPolygon {
 public:
  DiscPolygon() = default;

  static DiscPolygon empty_set(double radius);
  static DiscPolygon single_point(Point p, double radius);
  static DiscPolygon full_disc(Point center, double radius, Point boundary_vertex);
  // Builds boundary arcs for vertices already known to be in strictly convex
  // CCW position with pairwise distances < 2 * radius.
  static DiscPolygon from_ccw_vertices(std::vector<Point> vertices, double radius);

  double radius() const { return radius_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  bool is_empty() const { return vertices_.empty(); }
  std::size_t vertex_count() const { return vertices_.size(); }

  // Shoelace area of the vertex polygon plus one circular segment per arc.
  double area() const;
  // True iff q lies in the closed disc of every boundary arc.
  bool contains(Point q, double eps = kGeomEps) const;

  // Throws InvariantError if the representation is inconsistent.
  void validate() const;

 private:
  double radius_ = 0.0;
  std::vector<Point> vertices_;
  std::vector<Arc> arcs_;
};

struct HullStats {
  double area = 0.0;
  std::size_t vertex_count = 0;
};

// The two centers of radius-r circles through a and b; the first returned
// center lies to the left of the directed segment a -> b.
// Requires 0 < |a-b| < 2r, otherwise throws GeometryError.
std::pair<Point, Point> arc_centers(Point a, Point b, double r);

// Intersection of all radius-r closed discs containing both a and b: the
// lens bounded by the two shorter arcs through them. At |a-b| = 2r this is
// the single disc centered at the midpoint. Throws GeometryError if
// |a-b| > 2r.
DiscPolygon spindle(Point a, Point b, double r);

// Monotone-chain convex hull, CCW, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> points, double eps = kGeomEps);

// Signed shoelace area (positive for CCW).
double polygon_area(std::span<const Point> ccw_vertices);

// Hull of a finite point set under radius-r arcs: linear convex hull first,
// then removal of every vertex lying inside the spindle of its neighbours.
// Requires all pairwise distances <= 2r (checked on hull vertices, which
// realize the diameter); throws GeometryError otherwise.
DiscPolygon spindle_hull(std::span<const Point> points, double r);

inline HullStats hull_stats(const DiscPolygon& p) {
  return {p.area(), p.vertex_count()};
}

// Brute-force evaluation of the defining intersection: q belongs to the hull
// of `points` iff every radius-r disc containing all of them contains q.
// Decided analytically from the boundary of the region of admissible disc
// centers; each boundary arc is cross-checked at `resolution` sampled angles.
// Independent of spindle_hull and intended as its test oracle.
bool hull_membership_oracle(std::span<const Point> points, double r, Point q,
                            int resolution = 64);

}  // namespace spindlelab
