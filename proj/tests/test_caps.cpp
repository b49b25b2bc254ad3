#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "spindlelab/caps.hpp"
#include "spindlelab/stats.hpp"

using namespace spindlelab;

namespace {

constexpr double kPi = std::numbers::pi;

// Forwards the geometry of another body but hides its closed-form cap areas,
// so the generic quadrature path can be tested against them.
class GenericView final : public ConvexBody {
 public:
  explicit GenericView(const ConvexBody& inner) : inner_(inner) {}
  std::string kind() const override { return inner_.kind(); }
  Point boundary(double t) const override { return inner_.boundary(t); }
  Point boundary_derivative(double t) const override {
    return inner_.boundary_derivative(t);
  }
  double curvature(double t) const override { return inner_.curvature(t); }
  double area() const override { return inner_.area(); }
  BoundingBox bbox() const override { return inner_.bbox(); }
  bool contains(Point p) const override { return inner_.contains(p); }
  double support_param(Point u) const override { return inner_.support_param(u); }

 private:
  const ConvexBody& inner_;
};

// v on the unit disc: circular segment at distance d from the center.
double disc_min_cap(double d) {
  return std::acos(d) - d * std::sqrt(1.0 - d * d);
}

}  // namespace

TEST_CASE("halfplane cap area: generic quadrature matches the disc closed form") {
  const auto disc = make_unit_disc();
  const GenericView generic(*disc);
  for (double level : {-0.8, -0.2, 0.0, 0.3, 0.7, 0.95}) {
    for (double alpha : {0.0, 0.7, 2.9}) {
      const Point u{std::cos(alpha), std::sin(alpha)};
      const double closed = halfplane_cap_area(*disc, u, level);
      const double quad = halfplane_cap_area(generic, u, level);
      CHECK(quad == doctest::Approx(closed).epsilon(1e-10));
    }
  }
}

TEST_CASE("disc-cap area: generic quadrature matches the lens closed form") {
  const auto disc = make_unit_disc();
  const GenericView generic(*disc);
  const double r = 2.0;
  for (double h : {1e-4, 1e-2, 0.1, 0.5, 1.2}) {
    const Point p{-(r + h) + 1.0, 0.0};  // vertex at (1, 0)
    const double closed = disc_cap_area_by_center(*disc, p, r);
    const double quad = disc_cap_area_by_center(generic, p, r);
    CHECK(closed == doctest::Approx(kPi - lens_area(1.0, r, norm(p))).epsilon(1e-12));
    CHECK(quad == doctest::Approx(closed).epsilon(1e-7));
  }
}

TEST_CASE("disc-cap area agrees with Monte Carlo hit counting") {
  const auto disc = make_unit_disc();
  const double r = 2.0;
  const double h = 0.3;
  const Point p{1.0 - (r + h), 0.0};
  const double exact = disc_cap_area(DiscCap{disc.get(), 0.0, h, r});

  RandomStream rng(5150);
  const int samples = 1000000;
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    const Point q = sample_uniform(*disc, rng);
    if (dist(q, p) >= r) ++hits;
  }
  const double f = static_cast<double>(hits) / samples;
  const double est = kPi * f;
  const double se = kPi * std::sqrt(f * (1.0 - f) / samples);
  CHECK(std::abs(est - exact) < 4.0 * se);
}

TEST_CASE("disc-cap edge heights") {
  const auto disc = make_unit_disc();
  CHECK(disc_cap_area(DiscCap{disc.get(), 0.3, 0.0, 2.0}) == 0.0);
  CHECK_THROWS_AS(disc_cap_area(DiscCap{disc.get(), 0.3, 5.0, 2.0}), DomainError);
  CHECK_THROWS_AS(disc_cap_area(DiscCap{disc.get(), 0.3, -0.1, 2.0}), DomainError);
}

TEST_CASE("cap area limit: A(D(x0,h)) h^{-3/2} -> (4/3) sqrt(2/(kappa - 1/r))") {
  const double r = 5.0;
  const double h = 1e-4;
  const auto disc = make_unit_disc();
  const double disc_limit = (4.0 / 3.0) * std::sqrt(2.0 / (1.0 - 1.0 / r));
  const double disc_ratio =
      disc_cap_area(DiscCap{disc.get(), 0.0, h, r}) / (h * std::sqrt(h));
  CHECK(std::abs(disc_ratio - disc_limit) / disc_limit < 0.01);

  const auto ell = make_ellipse(2.0, 1.0);
  const double ell_limit = (4.0 / 3.0) * std::sqrt(2.0 / (2.0 - 1.0 / r));
  const double ell_ratio =
      disc_cap_area(DiscCap{ell.get(), 0.0, h, r}) / (h * std::sqrt(h));
  CHECK(std::abs(ell_ratio - ell_limit) / ell_limit < 0.01);
}

TEST_CASE("disc-cap areas scale like h^{3/2}") {
  const double r = 5.0;
  for (const auto& body : {make_unit_disc(), make_ellipse(2.0, 1.0)}) {
    for (double t0 : {0.0, 0.37}) {
      std::vector<double> hs, areas;
      for (double h = 1e-4; h <= 1.05e-2; h *= std::sqrt(10.0)) {
        hs.push_back(h);
        areas.push_back(disc_cap_area(DiscCap{body.get(), t0, h, r}));
      }
      const ScalingFit fit = fit_log_log(hs, areas);
      CHECK(std::abs(fit.exponent - 1.5) < 0.03);
    }
  }
}

TEST_CASE("min cap area on the unit disc matches the segment closed form") {
  const auto disc = make_unit_disc();
  CHECK(min_cap_area(*disc, {0.0, 0.0}) == doctest::Approx(kPi / 2).epsilon(1e-9));
  for (double d : {0.3, 0.62, 0.9}) {
    const Point x{d * std::cos(1.1), d * std::sin(1.1)};
    CHECK(min_cap_area(*disc, x) == doctest::Approx(disc_min_cap(d)).epsilon(1e-8));
  }
  CHECK(min_cap_area(*disc, {0.0, 1.0 - 1e-9}) < 1e-5);
  CHECK_THROWS_AS(min_cap_area(*disc, {1.2, 0.0}), DomainError);
}

TEST_CASE("min cap area on the ellipse matches the affine-map oracle") {
  // a linear map sends disc caps to ellipse caps and scales all areas by ab
  const auto ell = make_ellipse(2.0, 1.0);
  RandomStream rng(9001);
  for (int i = 0; i < 12; ++i) {
    Point x{rng.next_in(-2.0, 2.0), rng.next_in(-1.0, 1.0)};
    if (!ell->contains(x)) {
      --i;
      continue;
    }
    const double d = std::hypot(x.x / 2.0, x.y);
    const double oracle = 2.0 * disc_min_cap(d);
    CHECK(min_cap_area(*ell, x) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("min disc-cap area on the unit disc: symmetric closed form") {
  const auto disc = make_unit_disc();
  const double r = 2.0;
  for (double d : {0.0, 0.25, 0.6, 0.9}) {
    const Point x{d * std::cos(0.4), d * std::sin(0.4)};
    const double expected = kPi - lens_area(1.0, r, r - d);
    CHECK(min_disc_cap_area(*disc, x, r) == doctest::Approx(expected).epsilon(1e-7));
  }
  CHECK(min_disc_cap_area(*disc, {0.0, 1.0 - 1e-9}, r) < 1e-5);
  CHECK_THROWS_AS(min_disc_cap_area(*disc, {1.2, 0.0}, r), DomainError);
}

TEST_CASE("min disc-cap area is stable under a 10x finer direction scan") {
  const auto ell = make_ellipse(2.0, 1.0);
  const double r = 6.0;
  const Point x{0.9, 0.3};
  const double coarse = min_disc_cap_area(*ell, x, r);
  // direct scan over cap vertices at 10x the optimizer grid
  double fine = 1e300;
  for (int i = 0; i < 2560; ++i) {
    const double t = static_cast<double>(i) / 2560.0;
    const Point x0 = ell->boundary(t);
    const Point u = ell->outer_normal(t);
    const Point w = x0 - x;
    const double pw = dot(u, w);
    const double disc = pw * pw - norm2(w) + r * r;
    if (disc < 0.0) continue;
    double s = pw - std::sqrt(disc);
    if (s < r) s = pw + std::sqrt(disc);
    if (s < r) continue;
    bool proper = false;
    const double a = disc_cap_area_by_center(*ell, x0 - s * u, r, &proper);
    if (proper) fine = std::min(fine, a);
  }
  CHECK(coarse <= fine + 1e-10);
  CHECK(coarse == doctest::Approx(fine).epsilon(1e-4));
}

TEST_CASE("the minimal disc-cap dominates the minimal linear cap") {
  const double r_disc = 2.0;
  const double r_ell = 6.0;
  const auto disc = make_unit_disc();
  const auto ell = make_ellipse(2.0, 1.0);
  RandomStream rng(808);
  for (int i = 0; i < 25; ++i) {
    const Point xd = sample_uniform(*disc, rng);
    CHECK(min_disc_cap_area(*disc, xd, r_disc) >= min_cap_area(*disc, xd) - 1e-9);
  }
  for (int i = 0; i < 8; ++i) {
    const Point xe = sample_uniform(*ell, rng);
    CHECK(min_disc_cap_area(*ell, xe, r_ell) >= min_cap_area(*ell, xe) - 1e-9);
  }
}

TEST_CASE("floating body membership") {
  const auto disc = make_unit_disc();
  const FloatingBodySpec lin{disc.get(), 1e-3, FloatingBodyKind::linear, 0.0};
  const FloatingBodySpec spin{disc.get(), 1e-3, FloatingBodyKind::spindle, 2.0};
  for (const auto& spec : {lin, spin}) {
    CHECK(floating_body_contains(spec, {0.0, 0.0}));
    CHECK_FALSE(floating_body_contains(spec, {0.0, 1.0 - 1e-12}));
  }
  // nesting: K_(t2) inside K_(t1) for t1 < t2
  RandomStream rng(5);
  const FloatingBodySpec deeper{disc.get(), 1e-2, FloatingBodyKind::linear, 0.0};
  for (int i = 0; i < 40; ++i) {
    const Point x = sample_uniform(*disc, rng);
    if (floating_body_contains(deeper, x)) CHECK(floating_body_contains(lin, x));
  }
  CHECK_THROWS_AS(floating_body_contains({disc.get(), 0.0, FloatingBodyKind::linear, 0.0},
                                         Point{0, 0}),
                  DomainError);
  CHECK_THROWS_AS(floating_body_contains({disc.get(), 2.0, FloatingBodyKind::linear, 0.0},
                                         Point{0, 0}),
                  DomainError);
}

TEST_CASE("floating body polygonalization matches the radial closed forms") {
  const auto disc = make_unit_disc();
  const double t = 1e-3;
  const double r = 2.0;

  // linear kind: the floating body of a disc is a concentric disc
  const auto solve_radius = [&](auto&& vfun) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (vfun(mid) >= t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double rho_lin = solve_radius(disc_min_cap);
  const FloatingBodyApprox lin({disc.get(), t, FloatingBodyKind::linear, 0.0}, 512);
  const double rho_spin = solve_radius(
      [&](double d) { return kPi - lens_area(1.0, r, r - d); });
  const FloatingBodyApprox spin({disc.get(), t, FloatingBodyKind::spindle, r}, 512);
  for (const Point& b : lin.boundary()) {
    CHECK(norm(b) == doctest::Approx(rho_lin).epsilon(1e-7));
  }
  for (const Point& b : spin.boundary()) {
    CHECK(norm(b) == doctest::Approx(rho_spin).epsilon(1e-7));
  }
  // the spindle floating body contains the linear one (first sandwich inclusion)
  CHECK(rho_spin > rho_lin);

  // membership agreement away from the boundary band
  RandomStream rng(17);
  for (int i = 0; i < 200; ++i) {
    const Point x = sample_uniform(*disc, rng);
    if (std::abs(norm(x) - rho_spin) < 1e-4) continue;
    CHECK(spin.contains(x) == (norm(x) < rho_spin));
  }
}

TEST_CASE("spindle floating body requires r > r_M") {
  const auto disc = make_unit_disc();
  CHECK_THROWS_AS(
      FloatingBodyApprox({disc.get(), 1e-3, FloatingBodyKind::spindle, 0.9}, 128),
      DomainError);
}

TEST_CASE("wet part area: smallness, seed stability, 2/3 scaling") {
  const auto disc = make_unit_disc();
  const std::size_t samples = 2000000;

  RandomStream rng_a(100);
  RandomStream rng_b(200);
  const FloatingBodySpec spec{disc.get(), 1e-3, FloatingBodyKind::spindle, 2.0};
  const FloatingBodyApprox fb(spec, 1024);
  const MonteCarloEstimate ea = wet_part_area(fb, samples, rng_a);
  const MonteCarloEstimate eb = wet_part_area(fb, samples, rng_b);
  CHECK(std::abs(ea.value - eb.value) <
        3.0 * std::hypot(ea.std_error, eb.std_error));

  RandomStream rng_tiny(300);
  const MonteCarloEstimate tiny = wet_part_area(
      {disc.get(), 1e-6, FloatingBodyKind::linear, 0.0}, 200000, rng_tiny, 512);
  CHECK(tiny.value < 2e-3);

  for (const auto kind : {FloatingBodyKind::linear, FloatingBodyKind::spindle}) {
    std::vector<double> ts, areas;
    std::uint64_t seed = 1000;
    for (double t : {1e-2, 1e-3, 1e-4}) {
      RandomStream rng(seed++);
      const FloatingBodySpec s{disc.get(), t, kind, 2.0};
      areas.push_back(wet_part_area(s, samples, rng, 1024).value);
      ts.push_back(t);
    }
    const ScalingFit fit = fit_log_log(ts, areas);
    CHECK(std::abs(fit.exponent - 2.0 / 3.0) < 0.05);
  }
}

TEST_CASE("sandwich check on the unit disc") {
  const auto disc = make_unit_disc();
  RandomStream rng(2718);
  const SandwichReport rep = sandwich_check(*disc, 1e-3, 2.0, 2000, rng);
  CHECK(rep.violations == 0);
  CHECK(rep.qualifying_probes > 0);
  CHECK(rep.empirical_c0 > 0.0);
  CHECK(rep.empirical_c0 < 1.0);
}

TEST_CASE("visibility region is inside the wet part and non-trivial") {
  const auto disc = make_unit_disc();
  const double t = 1e-3;
  const double r = 2.0;
  const FloatingBodyApprox obstacle({disc.get(), t, FloatingBodyKind::spindle, r},
                                    1024);
  RandomStream rng_vis(31);
  const VisibilityEstimate vis = visibility_area(obstacle, 0.0, 1000000, rng_vis);
  RandomStream rng_wet(32);
  const MonteCarloEstimate wet = wet_part_area(obstacle, 1000000, rng_wet);
  CHECK(vis.visible_hits > 0);
  CHECK(vis.visible_hits <= vis.wet_hits);
  CHECK(vis.area <= wet.value + 3.0 * std::hypot(vis.std_error, wet.std_error));
  CHECK(vis.area > 0.0);
  CHECK(vis.area < wet.value);  // only a slice of the wet ring sees z
}
