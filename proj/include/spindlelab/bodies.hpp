#pragma once

#include <memory>
#include <optional>
#include <string>

#include "spindlelab/geometry.hpp"
#include "spindlelab/rng.hpp"

namespace spindlelab {

struct BoundingBox {
  Point lo;
  Point hi;
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }
};

// Smooth convex disc with positive boundary curvature, parameterized CCW
// over t in [0,1). Immutable and safe to share across threads.
class ConvexBody {
 public:
  virtual ~ConvexBody() = default;

  virtual std::string kind() const = 0;
  virtual Point boundary(double t) const = 0;
  virtual Point boundary_derivative(double t) const = 0;  // d gamma / dt
  virtual double curvature(double t) const = 0;
  virtual double area() const = 0;
  virtual BoundingBox bbox() const = 0;
  virtual bool contains(Point p) const = 0;
  // Parameter of the boundary point whose outer unit normal is u.
  virtual double support_param(Point u) const = 0;
  // Closed form for A(K \ disc(center, rho)) where available.
  virtual std::optional<double> disc_cap_area_closed_form(Point center,
                                                          double rho) const {
    (void)center;
    (void)rho;
    return std::nullopt;
  }
  // Closed form for A(K intersect {p : <p,u> >= level}) where available.
  virtual std::optional<double> halfplane_cap_area_closed_form(Point u,
                                                               double level) const {
    (void)u;
    (void)level;
    return std::nullopt;
  }

  Point outer_normal(double t) const {
    const Point d = boundary_derivative(t);
    const double n = norm(d);
    return {d.y / n, -d.x / n};
  }
};

struct CurvatureSummary {
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double r_M = 0.0;  // 1 / kappa_min: K slides freely in a disc of this radius
  double r_m = 0.0;  // 1 / kappa_max: a disc of this radius rolls freely in K
};

std::unique_ptr<ConvexBody> make_unit_disc();
std::unique_ptr<ConvexBody> make_ellipse(double a, double b);  // requires a >= b > 0

CurvatureSummary curvature_summary(const ConvexBody& body);

// Arc-length integral of (curvature - 1/r)^(1/3) over the boundary.
// Requires r strictly greater than r_M; throws DomainError otherwise.
double boundary_integral(const ConvexBody& body, double r);

// (2 A(K)^2 / 3)^(1/3) * Gamma(5/3) * boundary_integral(K, r): the limit of
// the rescaled expected missed area E[A(K \ hull_n)] * n^(2/3).
double expected_area_constant(const ConvexBody& body, double r);

// Rejection sampling from the bounding box; exactly uniform on K.
Point sample_uniform(const ConvexBody& body, RandomStream& rng);

// Area of the intersection of two discs with radii ra, rb and center
// distance d (exposed as a reference formula for caps and tests).
double lens_area(double ra, double rb, double d);

// Quadrature relative tolerance; SPINDLELAB_QUAD_TOL overrides the 1e-8 default.
double quad_tolerance();

}  // namespace spindlelab
