#include "hmcone/cones.hpp"
#include "hmcone/error.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace hmcone;

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ConfigError;
}

RiemannianCone line_cone(const RadiusFunction& r) {
  RiemannianCone c;
  c.ambient = ModelSpace::euclidean(2);
  c.ray = {vec({0.0, 0.0}), vec({1.0, 0.0})};
  c.radius = r;
  return c;
}

}  // namespace

TEST_CASE("classical cone membership") {
  const PerturbedCone c = classical_cone(vec({0.0, 0.0}), vec({0.0, 2.0}), kQuarterPi);
  CHECK(c.in_region(vec({0.0, 1.0})));
  CHECK(c.in_region(vec({0.5, 1.0})));
  CHECK_FALSE(c.in_region(vec({1.5, 1.0})));
  CHECK_FALSE(c.in_region(vec({0.0, -1.0})));
}

TEST_CASE("enclosing hyperplane of a classical cone") {
  const PerturbedCone c = classical_cone(vec({0.0, 0.0}), vec({0.0, 1.0}), kQuarterPi);
  const Vec p = vec({0.0, 1.0});
  const Enclosure e = enclosing_hyperplane(c, p);
  CHECK(e.plane.eval(p) < 0.0);
  // The cut-off triangle below y = 2 fits in a ball of radius sqrt(5) about p, up to one cell.
  CHECK(e.radius <= std::sqrt(5.0) + 0.2);
  CHECK(e.radius >= 1.0);
}

TEST_CASE("cones with affine lines admit no enclosure") {
  CHECK(code_of([] { enclosing_hyperplane(halfspace_region(2), vec({0.0, 1.0})); }) ==
        ErrorCode::EnclosureNotFound);
  CHECK(code_of([] { enclosing_hyperplane(two_ray_cone(0.0), vec({0.0, 1.0})); }) ==
        ErrorCode::EnclosureNotFound);
  CHECK(code_of([] { enclosing_hyperplane(log_cone(), vec({0.0, -1.0})); }) == ErrorCode::NotInConeRegion);
}

TEST_CASE("log cone is cut off by a line of small slope") {
  const Enclosure e = enclosing_hyperplane(log_cone(), vec({0.0, 1.0}));
  CHECK(e.plane.normal(0) < 0.0);
  CHECK(e.plane.normal(1) > 0.0);
}

TEST_CASE("compact cone regions are enclosed by any plane") {
  const Enclosure e = enclosing_hyperplane(compact_cone(vec({0.0, 0.0, 0.0}), 1.0), vec({0.0, 0.0, 0.1}));
  CHECK(e.radius <= 2.2);
}

TEST_CASE("line probes find the degenerate halfplane's lines only") {
  const LineProbeReport deg = affine_line_check(two_ray_cone(0.0), 2000, 1000.0, 1);
  CHECK(deg.line_found);
  for (double s : {-1000.0, -3.0, 0.0, 17.0, 1000.0}) CHECK(two_ray_cone(0.0).in_region(deg.base + s * deg.direction));
  CHECK_FALSE(affine_line_check(two_ray_cone(0.3), 2000, 1000.0, 1).line_found);
  CHECK_FALSE(affine_line_check(xsinx_cone(true), 2000, 1000.0, 1).line_found);
}

TEST_CASE("line probes: serial and parallel agree") {
  const LineProbeReport a = affine_line_check(halfspace_region(3), 500, 100.0, 4, false);
  const LineProbeReport b = affine_line_check(halfspace_region(3), 500, 100.0, 4, true);
  CHECK(a.line_found == b.line_found);
  CHECK(a.base == b.base);
  CHECK(a.direction == b.direction);
}

TEST_CASE("local notch cone") {
  const LocalConeRegion r = local_cone_region(notch_local_cone(1.0), vec({-0.3, 0.8}));
  CHECK(r.cells > 0);
  CHECK(r.radius < 1.5);
  CHECK(code_of([] { local_cone_region(notch_local_cone(0.2), vec({-0.3, 0.8})); }) ==
        ErrorCode::UnboundedComponent);
  const Hyperplane h{vec({0.0, 1.0}), 0.0};
  CHECK(local_cone_region(compact_local_cone(vec({0.0, 0.0}), 1.0, h), vec({0.2, 0.3})).radius < 1.3);
}

TEST_CASE("ball containment in the plane matches the secant criterion") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.1, 3.0);
  const RadiusFunction fns[] = {cos_theta_radius(0.5), linear_radius(1.5), quadratic_radius(1.0)};
  for (const RadiusFunction& r : fns) {
    const RiemannianCone c = line_cone(r);
    for (int k = 0; k < 40; ++k) {
      double t1 = unif(rng), t2 = unif(rng);
      if (t1 > t2) std::swap(t1, t2);
      CHECK(ball_containment(c, t1, t2) == (r.r(t2) - r.r(t1) >= t2 - t1));
    }
  }
}

TEST_CASE("hyperbolic ball containment agrees with euclidean circles") {
  // Along the vertical ray from (0, 1) the hyperbolic ball of radius r about (0, e^t)
  // is the euclidean disk with centre height e^t cosh r and radius e^t sinh r.
  RiemannianCone c;
  c.ambient = ModelSpace::hyperbolic(2);
  c.ray = {vec({0.0, 1.0}), vec({0.0, 1.0})};
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(0.1, 2.0);
  for (double slope : {0.5, 1.5}) {
    c.radius = linear_radius(slope);
    for (int k = 0; k < 30; ++k) {
      double t1 = unif(rng), t2 = unif(rng);
      if (t1 > t2) std::swap(t1, t2);
      const double r1 = slope * t1, r2 = slope * t2;
      const double c1 = std::exp(t1) * std::cosh(r1), s1 = std::exp(t1) * std::sinh(r1);
      const double c2 = std::exp(t2) * std::cosh(r2), s2 = std::exp(t2) * std::sinh(r2);
      const bool inside = std::abs(c2 - c1) + s1 <= s2;
      CHECK(ball_containment(c, t1, t2) == inside);
    }
  }
}

TEST_CASE("application cone in the plane validates") {
  const RiemannianConeReport r = riemannian_cone_validate(application_cone('a'));
  CHECK(r.worst_margin > 0.0);
  REQUIRE(r.separation.size() == 5);
  for (const auto& s : r.separation) CHECK(s.components == 2);
}

TEST_CASE("radius violations are reported") {
  RiemannianCone c = line_cone(linear_radius(2.0));
  c.t_max = 4.0;
  CHECK(code_of([&] { riemannian_cone_validate(c); }) == ErrorCode::RadiusViolation);
  RiemannianCone s = application_cone('e');
  s.radius = linear_radius(1.0, 1.0);
  CHECK(code_of([&] { riemannian_cone_validate(s); }) == ErrorCode::RadiusViolation);
}

TEST_CASE("torus transform radius") {
  const TorusTransform tt = torus_cone_transform(kQuarterPi);
  for (double t : {0.5, 1.0, 3.0}) {
    CHECK(tt.cone.radius.r(t) == doctest::Approx(std::atan(std::cos(kQuarterPi) * t)));
    CHECK(tt.doubled_radius(t) == doctest::Approx(2.0 * tt.cone.radius.r(t)));
    CHECK(torus_image_circumradius(tt, t) >= tt.doubled_radius(t) - 1e-9);
  }
  CHECK(code_of([] { torus_cone_transform(0.0); }) == ErrorCode::InvalidAngle);
  CHECK(code_of([] { classical_cone(vec({0.0, 0.0}), vec({0.0, 1.0}), 2.0); }) == ErrorCode::InvalidAngle);
}
