#include "hmcone/error.hpp"
#include "hmcone/foliation.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace hmcone;

namespace {

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

BranchData branched_family() {
  const auto piece = [](bool concave, std::optional<int> next = std::nullopt) { return BranchPiece{concave, next}; };
  BranchData d;
  d.leaves.push_back({2, 2.0, {piece(false), piece(true, 3), piece(true)}});
  d.leaves.push_back({3, 3.0, {piece(false, 2), piece(true), piece(true, 5), piece(true)}});
  d.leaves.push_back({5, 5.0, {piece(false, 3), piece(true), piece(true)}});
  return d;
}

}  // namespace

TEST_CASE("annulus leaves are spheres with the convex side inside") {
  const Foliation f = annulus_foliation(1.0, 2.0, ModelSpace::euclidean(2));
  CHECK(f.orientation() == 1);
  CHECK(*f.leaf_param(vec({0.0, 1.5})) == doctest::Approx(1.5));
  CHECK(f.signed_coord(1.5, vec({0.0, 1.2})) < 0.0);
  CHECK(f.signed_coord(1.5, vec({0.0, 1.8})) > 0.0);
  CHECK(f.contains(vec({1.2, 0.0})));
  CHECK_FALSE(f.contains(vec({0.5, 0.0})));
  CHECK(order_lt(f, vec({1.1, 0.0}), vec({0.0, 1.9})));
  CHECK_FALSE(order_lt(f, vec({0.0, 1.9}), vec({1.1, 0.0})));
}

TEST_CASE("leaf samples lie on their leaf") {
  const std::vector<Foliation> fs = {
      annulus_foliation(1.0, 2.0, ModelSpace::euclidean(3)),
      halfsphere_cone_foliation(vec({0.0, 0.0}), vec({0.0, 1.0}), 2.0, 0.1, ModelSpace::euclidean(2)),
      horosphere_foliation(2.0, 0.1, ModelSpace::hyperbolic(3)),
      sphere_cap_foliation(0.2, ModelSpace::sphere(2)),
  };
  for (const Foliation& f : fs) {
    const double t = 0.5 * (f.t_min() + f.t_max());
    for (const Vec& p : f.leaf_sample(t, 64, 3)) {
      CHECK(std::abs(f.signed_coord(t, p)) < 1e-10);
      if (f.contains(p)) CHECK(*f.leaf_param(p) == doctest::Approx(t).epsilon(1e-10));
    }
  }
}

TEST_CASE("horosphere family leaves are the graphs of sqrt(4t^2 - |x|^2) - t") {
  const Foliation f = horosphere_foliation(2.0, 0.1, ModelSpace::hyperbolic(2));
  CHECK(f.orientation() == -1);
  CHECK(f.concave_end() == doctest::Approx(0.1));
  for (double t : {0.2, 0.9, 1.7}) {
    for (double x : {0.0, 0.3 * t, -1.2 * t}) {
      const Vec p = vec({x, std::sqrt(4.0 * t * t - x * x) - t});
      CHECK(*f.leaf_param(p) == doctest::Approx(t).epsilon(1e-12));
    }
  }
}

TEST_CASE("sphere caps are geodesic circles of radius (pi - eps)/2") {
  const double eps = 0.3;
  const Foliation f = sphere_cap_foliation(eps, ModelSpace::sphere(2));
  const double rho = 0.5 * (std::numbers::pi - eps);
  CHECK(f.cap_radius() == doctest::Approx(rho));
  const double t = 0.4;
  for (const Vec& p : f.leaf_sample(t, 32, 1)) {
    CHECK(distance(f.space(), p, f.cap_center(t)) == doctest::Approx(rho).epsilon(1e-10));
  }
}

TEST_CASE("every family certifies strictly convex leaves") {
  const std::vector<Foliation> fs = {
      annulus_foliation(1.0, 2.0, ModelSpace::euclidean(2)),
      halfsphere_cone_foliation(vec({0.0, 0.0}), vec({1.0, 0.0}), 1.0, 0.1, ModelSpace::euclidean(2)),
      horosphere_foliation(2.0, 0.1, ModelSpace::hyperbolic(2)),
      sphere_cap_foliation(0.2, ModelSpace::sphere(2)),
  };
  for (const Foliation& f : fs) {
    const double t = f.t_min() + 0.3 * (f.t_max() - f.t_min());
    const ConvexityCertificate c = certify_leaf(f, t, 200);
    CHECK_MESSAGE(c.pass, f.name());
  }
}

TEST_CASE("interior leaves separate; disjoint copies do not form a foliation") {
  const Foliation f = annulus_foliation(1.0, 2.0, ModelSpace::euclidean(2));
  const SeparationReport ok = separating_check(f, 1.5, 128);
  CHECK(ok.separates);
  CHECK(ok.components == 2);
  const Foliation broken = annulus_copies(1.0, 2.0, {vec({0.0, 0.0}), vec({5.0, 0.0})});
  CHECK(separating_check(broken, 1.5, 128).components >= 3);
  CHECK(code_of([&] { separating_check(f, 2.5); }) == ErrorCode::OutsideFoliation);
}

TEST_CASE("separation grid: serial and parallel agree") {
  const Foliation f = horosphere_foliation(2.0, 0.1, ModelSpace::hyperbolic(2));
  const SeparationReport a = separating_check(f, 1.0, 96, false);
  const SeparationReport b = separating_check(f, 1.0, 96, true);
  CHECK(a.components == b.components);
  CHECK(a.active_cells == b.active_cells);
}

TEST_CASE("concave region of the annulus") {
  const Foliation f = annulus_foliation(1.0, 2.0, ModelSpace::euclidean(2));
  const ConcaveRegion r = concave_region(f, vec({1.5, 0.0}));
  CHECK(r.far_leaf == doctest::Approx(2.0));
  CHECK(r.contains(vec({0.0, 1.7})));
  CHECK_FALSE(r.contains(vec({0.0, 1.3})));
  for (const BoundarySample& s : sample_concave_boundary(f, vec({1.5, 0.0}), 16, 1)) {
    CHECK(s.point.norm() == doctest::Approx(2.0));
  }
}

TEST_CASE("leaf space of the annulus is one edge") {
  const LeafSpaceGraph g = leaf_space(annulus_foliation(1.0, 2.0, ModelSpace::euclidean(2)));
  CHECK(g.vertices.size() == 2);
  CHECK(g.edges.size() == 1);
  CHECK(g.acyclic());
}

TEST_CASE("branched leaf space is a tree with nine vertices") {
  const LeafSpaceGraph g = leaf_space(branched_family());
  CHECK(g.vertices.size() == 9);
  CHECK(g.edges.size() == 8);
  CHECK(g.acyclic());
  CHECK(g.to_text().find("L2 -> L3") != std::string::npos);
}

TEST_CASE("contradictory branch data is rejected") {
  BranchData d = branched_family();
  d.leaves[0].pieces[1].next_leaf = 5;
  d.leaves[2].pieces[0].next_leaf = 2;
  d.leaves[2].param = 1.0;  // leaf 5 now sits below leaf 2
  CHECK(code_of([&] { leaf_space(d); }) == ErrorCode::CyclicInput);
}

TEST_CASE("foliation parameter errors") {
  CHECK(code_of([] { annulus_foliation(2.0, 1.0, ModelSpace::euclidean(2)); }) == ErrorCode::DegenerateRadii);
  CHECK(code_of([] { horosphere_foliation(1.0, 2.0, ModelSpace::hyperbolic(2)); }) == ErrorCode::InvalidHeights);
  CHECK(code_of([] { sphere_cap_foliation(2.0, ModelSpace::sphere(2)); }) == ErrorCode::InvalidEpsilon);
  CHECK(code_of([] {
          halfsphere_cone_foliation(vec({0.0, 0.0}), vec({0.0, 2.0}), 1.0, 0.1, ModelSpace::euclidean(2));
        }) == ErrorCode::InvalidDirection);
}
