#include "spindlelab/bodies.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "spindlelab/quadrature.hpp"

namespace spindlelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double t) {
  t -= std::floor(t);
  return t;
}

class UnitDisc final : public ConvexBody {
 public:
  std::string kind() const override { return "disc"; }
  Point boundary(double t) const override {
    const double th = kTwoPi * t;
    return {std::cos(th), std::sin(th)};
  }
  Point boundary_derivative(double t) const override {
    const double th = kTwoPi * t;
    return {-kTwoPi * std::sin(th), kTwoPi * std::cos(th)};
  }
  double curvature(double) const override { return 1.0; }
  double area() const override { return std::numbers::pi; }
  BoundingBox bbox() const override { return {{-1.0, -1.0}, {1.0, 1.0}}; }
  bool contains(Point p) const override { return norm2(p) <= 1.0; }
  double support_param(Point u) const override {
    return wrap_unit(std::atan2(u.y, u.x) / kTwoPi);
  }
  std::optional<double> disc_cap_area_closed_form(Point center,
                                                  double rho) const override {
    const double d = norm(center);
    // defer to the generic path unless the circles properly cross
    if (d <= std::abs(1.0 - rho) || d >= 1.0 + rho) return std::nullopt;
    return std::numbers::pi - lens_area(1.0, rho, d);
  }
  std::optional<double> halfplane_cap_area_closed_form(Point,
                                                       double level) const override {
    if (level >= 1.0) return 0.0;
    if (level <= -1.0) return std::numbers::pi;
    const double seg = std::acos(std::abs(level)) -
                       std::abs(level) * std::sqrt(1.0 - level * level);
    return level >= 0.0 ? seg : std::numbers::pi - seg;
  }
};

class Ellipse final : public ConvexBody {
 public:
  Ellipse(double a, double b) : a_(a), b_(b) {}

  std::string kind() const override { return "ellipse"; }
  Point boundary(double t) const override {
    const double th = kTwoPi * t;
    return {a_ * std::cos(th), b_ * std::sin(th)};
  }
  Point boundary_derivative(double t) const override {
    const double th = kTwoPi * t;
    return {-kTwoPi * a_ * std::sin(th), kTwoPi * b_ * std::cos(th)};
  }
  double curvature(double t) const override {
    const double th = kTwoPi * t;
    const double s = std::sin(th);
    const double c = std::cos(th);
    const double w = a_ * a_ * s * s + b_ * b_ * c * c;
    return a_ * b_ / (w * std::sqrt(w));
  }
  double area() const override { return std::numbers::pi * a_ * b_; }
  BoundingBox bbox() const override { return {{-a_, -b_}, {a_, b_}}; }
  bool contains(Point p) const override {
    const double u = p.x / a_;
    const double v = p.y / b_;
    return u * u + v * v <= 1.0;
  }
  double support_param(Point u) const override {
    return wrap_unit(std::atan2(b_ * u.y, a_ * u.x) / kTwoPi);
  }

 private:
  double a_;
  double b_;
};

// Golden-section search for the minimum of f on [lo, hi] (unimodal there).
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

}  // namespace

std::unique_ptr<ConvexBody> make_unit_disc() { return std::make_unique<UnitDisc>(); }

std::unique_ptr<ConvexBody> make_ellipse(double a, double b) {
  if (!(b > 0.0) || !(a >= b)) {
    throw DomainError("make_ellipse: requires a >= b > 0");
  }
  return std::make_unique<Ellipse>(a, b);
}

CurvatureSummary curvature_summary(const ConvexBody& body) {
  constexpr int kGrid = 2048;
  int arg_min = 0;
  int arg_max = 0;
  double lo = body.curvature(0.0);
  double hi = lo;
  for (int i = 1; i < kGrid; ++i) {
    const double k = body.curvature(static_cast<double>(i) / kGrid);
    if (k < lo) {
      lo = k;
      arg_min = i;
    }
    if (k > hi) {
      hi = k;
      arg_max = i;
    }
  }
  const double step = 1.0 / kGrid;
  const auto refine = [&](int idx, double sign) {
    const double center = static_cast<double>(idx) / kGrid;
    const double t = golden_min(
        [&](double x) { return sign * body.curvature(x); }, center - step,
        center + step, 1e-12);
    return body.curvature(t);
  };
  lo = std::min(lo, refine(arg_min, 1.0));
  hi = std::max(hi, refine(arg_max, -1.0));
  if (!(lo > 0.0)) throw DomainError("curvature_summary: non-positive curvature");
  return {lo, hi, 1.0 / lo, 1.0 / hi};
}

double quad_tolerance() {
  static const double tol = [] {
    if (const char* s = std::getenv("SPINDLELAB_QUAD_TOL")) {
      char* end = nullptr;
      const double v = std::strtod(s, &end);
      if (end != s && v > 0.0 && v < 1.0) return v;
    }
    return 1e-8;
  }();
  return tol;
}

double boundary_integral(const ConvexBody& body, double r) {
  const CurvatureSummary cs = curvature_summary(body);
  if (!(r > cs.r_M)) {
    throw DomainError("boundary_integral: requires r > r_M = " + std::to_string(cs.r_M));
  }
  return integrate(
      [&](double t) {
        return std::cbrt(body.curvature(t) - 1.0 / r) * norm(body.boundary_derivative(t));
      },
      0.0, 1.0, quad_tolerance());
}

double expected_area_constant(const ConvexBody& body, double r) {
  const double a = body.area();
  return std::cbrt(2.0 * a * a / 3.0) * std::tgamma(5.0 / 3.0) *
         boundary_integral(body, r);
}

Point sample_uniform(const ConvexBody& body, RandomStream& rng) {
  const BoundingBox box = body.bbox();
  for (;;) {
    const Point p{rng.next_in(box.lo.x, box.hi.x), rng.next_in(box.lo.y, box.hi.y)};
    if (body.contains(p)) return p;
  }
}

double lens_area(double ra, double rb, double d) {
  if (d >= ra + rb) return 0.0;
  const double small = std::min(ra, rb);
  const double big = std::max(ra, rb);
  if (d <= big - small) return std::numbers::pi * small * small;
  const double cos_a = (d * d + ra * ra - rb * rb) / (2.0 * d * ra);
  const double cos_b = (d * d + rb * rb - ra * ra) / (2.0 * d * rb);
  const double s = 0.5 * std::sqrt(std::max(
                       0.0, (-d + ra + rb) * (d + ra - rb) * (d - ra + rb) * (d + ra + rb)));
  return ra * ra * std::acos(std::clamp(cos_a, -1.0, 1.0)) +
         rb * rb * std::acos(std::clamp(cos_b, -1.0, 1.0)) - s;
}

}  // namespace spindlelab
