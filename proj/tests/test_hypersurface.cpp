#include "hmcone/error.hpp"
#include "hmcone/hypersurface.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace hmcone;

namespace {

// Second fundamental form from the Levi-Civita connection of |dx|^2 / y^2:
// nabla_X Y = D_X Y + X(phi) Y + Y(phi) X - <X, Y> grad(phi), phi = -log y.
Mat christoffel_sff(const GraphFunction& g, const Vec& x) {
  const int n = g.dim;
  const double y = g.eval(x);
  const Vec grad = g.grad(x);
  const Mat hess = g.hess(x);
  Vec grad_phi = Vec::Zero(n + 1);
  grad_phi(n) = -1.0 / y;
  Vec normal(n + 1);
  normal.head(n) = -grad;
  normal(n) = 1.0;
  normal *= y / std::sqrt(1.0 + grad.squaredNorm());
  std::vector<Vec> tangent(n, Vec::Zero(n + 1));
  for (int i = 0; i < n; ++i) {
    tangent[i](i) = 1.0;
    tangent[i](n) = grad(i);
  }
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec d = Vec::Zero(n + 1);
      d(n) = hess(i, j);
      const Vec cov = d + tangent[i].dot(grad_phi) * tangent[j] + tangent[j].dot(grad_phi) * tangent[i] -
                      tangent[i].dot(tangent[j]) * grad_phi;
      a(i, j) = cov.dot(normal) / (y * y);
    }
  }
  return a;
}

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("graph formula agrees with the connection computation") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(-0.8, 0.8);
  const GraphFunction graphs[] = {sphere_beyond_infinity(1.3, 2), paraboloid_graph(0.7, 3, 1.0),
                                  horosphere_graph(0.4, 2)};
  for (const GraphFunction& g : graphs) {
    for (int k = 0; k < 50; ++k) {
      Vec x(g.dim);
      for (int i = 0; i < g.dim; ++i) x(i) = unif(rng);
      const Mat a = sff_hyperbolic_graph(g, x).matrix;
      CHECK((a - christoffel_sff(g, x)).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, a.norm()));
    }
  }
}

TEST_CASE("sphere beyond infinity at the apex") {
  const SecondFundamentalForm a = sff_hyperbolic_graph(sphere_beyond_infinity(1.0, 2), Vec::Zero(2));
  CHECK((a.matrix - 0.5 * Mat::Identity(2, 2)).norm() < 1e-14);
  CHECK((sphere_beyond_infinity_sff(1.0, Vec::Zero(2)) - 0.5 * Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("reference closed form and its spectrum") {
  const double q = 1.0;
  const Vec x = vec({1.0, 0.0, 0.0});
  const double f = std::sqrt(3.0) - 1.0;
  const Vec spec = eigen_spectrum(sphere_beyond_infinity_sff(q, x));
  CHECK(spec(0) == doctest::Approx(1.0 / (2.0 * f)));
  CHECK(spec(1) == doctest::Approx(1.0 / (2.0 * f)));
  CHECK(spec(2) == doctest::Approx(4.0 / 3.0 / (2.0 * f)));
}

TEST_CASE("graph formula on the sphere beyond infinity equals the closed form divided by f") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double q = 2.0;
  const GraphFunction g = sphere_beyond_infinity(q, 3);
  for (int k = 0; k < 100; ++k) {
    const Vec x = vec({unif(rng), unif(rng), unif(rng)}) * 1.5;
    const double f = g.eval(x);
    const Mat a = sff_hyperbolic_graph(g, x).matrix;
    CHECK((a - sphere_beyond_infinity_sff(q, x) / f).cwiseAbs().maxCoeff() < 1e-12 / (f * f));
  }
}

TEST_CASE("horospheres have unit principal curvature") {
  const double c = 0.3;
  const Mat a = sff_hyperbolic_graph(horosphere_graph(c, 2), vec({0.5, -2.0})).matrix;
  CHECK((a - Mat::Identity(2, 2) / (c * c)).norm() < 1e-12);
}

TEST_CASE("euclidean paraboloid curvature") {
  const SecondFundamentalForm a = sff_euclidean_graph(paraboloid_graph(0.5, 2), Vec::Zero(2));
  CHECK((a.matrix - Mat::Identity(2, 2)).norm() < 1e-14);
  CHECK(a.normal(2) == doctest::Approx(1.0));
}

TEST_CASE("finite-difference graphs track the analytic derivatives") {
  const GraphFunction exact = sphere_beyond_infinity(1.0, 2);
  const GraphFunction fd = finite_difference_graph(2, "fd", exact.eval, exact.domain);
  CHECK(fd.provenance == Provenance::FiniteDifference);
  const Vec x = vec({0.3, -0.4});
  CHECK((fd.grad(x) - exact.grad(x)).norm() < 1e-9);
  CHECK((fd.hess(x) - exact.hess(x)).norm() < 1e-6);
  CHECK(std::abs(sff_hyperbolic_graph(fd, x).min_eigenvalue - sff_hyperbolic_graph(exact, x).min_eigenvalue) <
        1e-6);
}

TEST_CASE("xsinx is not convex everywhere") {
  const GraphFunction g = xsinx_graph();
  const auto samples = grid_samples(g, -6.0, 6.0, 121);
  const ConvexityCertificate cert = certify_strict_convexity(g, ModelSpace::euclidean(2), samples);
  CHECK_FALSE(cert.pass);
  CHECK(cert.min_eigenvalue < 0.0);
}

TEST_CASE("certificate: serial and parallel agree exactly") {
  const GraphFunction g = sphere_beyond_infinity(1.0, 2);
  const auto samples = grid_samples(g, -1.7, 1.7, 101);
  const ModelSpace h = ModelSpace::hyperbolic(3);
  const ConvexityCertificate a = certify_strict_convexity(g, h, samples, 1e-8, false);
  const ConvexityCertificate b = certify_strict_convexity(g, h, samples, 1e-8, true);
  CHECK(a.pass);
  CHECK(a.min_eigenvalue == b.min_eigenvalue);
  CHECK(a.argmin_point == b.argmin_point);
}

TEST_CASE("hypersurface errors") {
  const GraphFunction g = sphere_beyond_infinity(1.0, 2);
  const auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ConfigError;
  };
  CHECK(code_of([&] { sff_hyperbolic_graph(g, vec({2.0, 0.0})); }) == ErrorCode::OutsideDomain);
  CHECK(code_of([&] { sff_hyperbolic_graph(paraboloid_graph(1.0, 1, -1.0), vec({0.0})); }) ==
        ErrorCode::NonpositiveHeight);
  CHECK(code_of([&] { certify_strict_convexity(g, ModelSpace::hyperbolic(3), {}); }) == ErrorCode::EmptySampleSet);
  CHECK(code_of([&] { sphere_beyond_infinity(0.0, 2); }) == ErrorCode::NonpositiveParameter);
}
