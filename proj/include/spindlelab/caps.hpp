#pragma once

#include <cstddef>
#include <vector>

#include "spindlelab/bodies.hpp"
#include "spindlelab/geometry.hpp"
#include "spindlelab/rng.hpp"

namespace spindlelab {

// Region cut off K by a radius-r disc: cap = K \ disc(p, r) with
// p = x0 - (r + h) * outer_normal(x0), vertex x0 = boundary(vertex_param).
struct DiscCap {
  const ConvexBody* body = nullptr;
  double vertex_param = 0.0;
  double height = 0.0;
  double radius = 0.0;
};

// Halfplane cap with the cut orthogonal to the outer normal at the vertex.
struct LinearCap {
  const ConvexBody* body = nullptr;
  double vertex_param = 0.0;
  double height = 0.0;
};

enum class FloatingBodyKind { linear, spindle };

struct FloatingBodySpec {
  const ConvexBody* body = nullptr;
  double t = 0.0;  // cap-area parameter, 0 < t < A(K)/2
  FloatingBodyKind kind = FloatingBodyKind::linear;
  double radius = 0.0;  // cutting radius for the spindle kind
};

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// A(K intersect {p : <p,u> >= level}); u must be a unit vector.
double halfplane_cap_area(const ConvexBody& body, Point u, double level);

// A(K \ disc(center, r)). If the cutting circle does not cross bd K, the
// area is still well defined (0 or A(K) or A(K) - pi r^2) and `proper_cap`
// is set to false.
double disc_cap_area_by_center(const ConvexBody& body, Point center, double r,
                               bool* proper_cap = nullptr);

double linear_cap_area(const LinearCap& cap);
// Throws DomainError when the cutting circle misses bd K (height too large).
double disc_cap_area(const DiscCap& cap);

// v(x): minimal halfplane cap area over all cut directions through x.
double min_cap_area(const ConvexBody& body, Point x);
// v_r(x): minimal disc-cap area over all radius-r cutting circles through x.
double min_disc_cap_area(const ConvexBody& body, Point x, double r);

bool floating_body_contains(const FloatingBodySpec& spec, Point x);

// The floating body materialized as a dense convex polygon: one level-t cap
// per boundary direction, connected through the deepest point of each cut.
class FloatingBodyApprox {
 public:
  explicit FloatingBodyApprox(FloatingBodySpec spec, int directions = 2048);

  const FloatingBodySpec& spec() const { return spec_; }
  const std::vector<Point>& boundary() const { return poly_; }

  // margin > 0 demands the point be inside by at least that distance.
  bool contains(Point p, double margin = 0.0) const;

 private:
  FloatingBodySpec spec_;
  std::vector<Point> poly_;     // CCW
  std::vector<double> angles_;  // angle of poly_[i] - centroid_, increasing
  Point centroid_;
};

// Monte Carlo area of the wet part K \ K_(t), with standard error.
MonteCarloEstimate wet_part_area(const FloatingBodySpec& spec, std::size_t samples,
                                 RandomStream& rng, int directions = 2048);
MonteCarloEstimate wet_part_area(const FloatingBodyApprox& body, std::size_t samples,
                                 RandomStream& rng);

struct SandwichReport {
  double t = 0.0;
  double r = 0.0;
  std::size_t probes = 0;
  // probes with v >= t (in the linear floating body) but v_r < t
  std::size_t violations = 0;
  // min v(x)/t over probes with v_r(x) >= t; NaN when no probe qualifies
  double empirical_c0 = 0.0;
  std::size_t qualifying_probes = 0;
};

// Probes the two floating-body inclusions at level t and estimates the
// largest c0 with v_r(x) >= t  =>  v(x) >= c0 t over the probe set.
SandwichReport sandwich_check(const ConvexBody& body, double t, double r,
                              std::size_t probes, RandomStream& rng);

struct VisibilityEstimate {
  double area = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::size_t wet_hits = 0;
  std::size_t visible_hits = 0;
};

// Monte Carlo area of the region of the wet part joined to z = boundary(z_param)
// by at least one shorter radius-r arc avoiding the spindle floating body.
VisibilityEstimate visibility_area(const ConvexBody& body, double z_param, double t,
                                   double r, std::size_t samples, RandomStream& rng,
                                   int directions = 2048, int arc_probes = 192);
VisibilityEstimate visibility_area(const FloatingBodyApprox& obstacle, double z_param,
                                   std::size_t samples, RandomStream& rng,
                                   int arc_probes = 192);

}  // namespace spindlelab
