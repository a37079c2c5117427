#include "hmcone/error.hpp"
#include "hmcone/harmonic.hpp"
#include "hmcone/mesh.hpp"

#include "doctest.h"

#include <cmath>
#include <filesystem>

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

MeshMap planar_map(const MeshDomain& mesh, const std::function<Vec(const Vec&)>& g) {
  MeshMap f;
  f.target = ModelSpace::euclidean(static_cast<int>(g(mesh.vertices[0]).size()));
  for (const Vec& v : mesh.vertices) f.images.push_back(g(v));
  return f;
}

MeshMap path_map(const MeshDomain& mesh, const ModelSpace& target, const Vec& a, const Vec& b) {
  MeshMap f;
  f.target = target;
  for (const Vec& v : mesh.vertices) {
    Vec x = (1.0 - v(0)) * a + v(0) * b;
    if (target.kind() == SpaceKind::Sphere) x.normalize();
    f.images.push_back(x);
  }
  return f;
}

}  // namespace

TEST_CASE("cotangent weights of an equilateral triangle") {
  const MeshDomain m = triangle_mesh({vec({0, 0}), vec({1, 0}), vec({0.5, std::sqrt(3.0) / 2.0})}, {{0, 1, 2}});
  REQUIRE(m.edges.size() == 3);
  for (const MeshEdge& e : m.edges) CHECK(e.weight == doctest::Approx(0.5 / std::sqrt(3.0)));
  CHECK(m.mass[0] == doctest::Approx(std::sqrt(3.0) / 12.0));
  CHECK(m.boundary_vertices().size() == 3);
  CHECK(code_of([] { triangle_mesh({vec({0, 0}), vec({1, 0}), vec({2, 0})}, {{0, 1, 2}}); }) ==
        ErrorCode::InvalidMesh);
}

TEST_CASE("square grid reproduces the five-point Laplacian") {
  const int n = 8;
  const MeshDomain m = square_grid_mesh(n, 1.0);
  const double h = 1.0 / n;
  CHECK(m.size() == static_cast<std::size_t>((n + 1) * (n + 1)));
  CHECK(m.min_weight() >= -1e-15);
  for (int i : m.interior_vertices()) {
    CHECK(m.mass[i] == doctest::Approx(h * h));
    double lap = 0.0;
    for (const auto& [j, w] : m.adjacency[i]) lap += w * (m.vertices[j].squaredNorm() - m.vertices[i].squaredNorm());
    CHECK(lap / m.mass[i] == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("path mesh weights and masses") {
  const MeshDomain m = path_mesh(4, 2.0);
  CHECK(m.size() == 5);
  for (const MeshEdge& e : m.edges) CHECK(e.weight == doctest::Approx(2.0));
  CHECK(m.mass.front() == doctest::Approx(0.25));
  CHECK(m.mass[2] == doctest::Approx(0.5));
}

TEST_CASE("OFF round trip") {
  const MeshDomain m = disk_mesh(6);
  const auto path = std::filesystem::temp_directory_path() / "hmcone_roundtrip.off";
  write_off(m, path.string());
  const MeshDomain r = read_off(path.string());
  CHECK(r.size() == m.size());
  CHECK(r.triangles == m.triangles);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK((r.vertices[i] - m.vertices[i]).norm() < 1e-12);
  std::filesystem::remove(path);
}

TEST_CASE("affine boundary data relax to the affine map in every mode") {
  const MeshDomain m = disk_mesh(16);
  const auto affine = [](const Vec& v) { return vec({1.0 + 2.0 * v(0) - v(1), 0.5 * v(1), v(0) + v(1)}); };
  MeshMap f0 = planar_map(m, affine);
  for (int i : m.interior_vertices()) f0.images[i] = Vec::Zero(3);
  for (RelaxMode mode : {RelaxMode::Direct, RelaxMode::GaussSeidel, RelaxMode::Jacobi}) {
    RelaxOptions o;
    o.mode = mode;
    o.tol = 1e-10;
    const RelaxResult r = relax_to_harmonic(m, f0, o);
    CHECK(r.residual < 1e-10);
    double err = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) err = std::max(err, (r.map.images[i] - affine(m.vertices[i])).norm());
    CHECK(err < 1e-9);
    for (std::size_t k = 1; k < r.energy_history.size(); ++k) {
      CHECK(r.energy_history[k] <= r.energy_history[k - 1] * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("constant boundary data give a constant harmonic map") {
  const MeshDomain m = disk_mesh(24);
  MeshMap f0 = planar_map(m, [](const Vec& v) { return Vec(vec({0.3, -0.7}) + v * 0.0); });
  for (int i : m.interior_vertices()) f0.images[i] = vec({5.0, 5.0});
  const RelaxResult r = relax_to_harmonic(m, f0);
  CHECK(dirichlet_energy(m, r.map) < 1e-18);
}

TEST_CASE("relaxed paths in the hyperbolic plane lie on the geodesic arc") {
  const MeshDomain m = path_mesh(32);
  const MeshMap f0 = path_map(m, ModelSpace::hyperbolic(2), vec({-1.0, 1.0}), vec({1.0, 1.0}));
  const RelaxResult r = relax_to_harmonic(m, f0);
  for (const Vec& x : r.map.images) CHECK(std::abs(x.norm() - std::sqrt(2.0)) < 1e-4);
  // Constant speed: consecutive hyperbolic distances agree.
  const double d0 = distance(r.map.target, r.map.images[0], r.map.images[1]);
  for (std::size_t i = 1; i + 1 < r.map.images.size(); ++i) {
    CHECK(distance(r.map.target, r.map.images[i], r.map.images[i + 1]) == doctest::Approx(d0).epsilon(1e-4));
  }
}

TEST_CASE("relaxed paths on the sphere follow the great circle") {
  const MeshDomain m = path_mesh(16);
  MeshMap f0 = path_map(m, ModelSpace::sphere(2), vec({1.0, 0.0, 0.0}), vec({0.0, 1.0, 0.0}));
  for (std::size_t i = 1; i + 1 < f0.images.size(); ++i) {
    f0.images[i] = vec({f0.images[i](0), f0.images[i](1), 0.3});
    f0.images[i].normalize();
  }
  const RelaxResult r = relax_to_harmonic(m, f0);
  for (const Vec& x : r.map.images) CHECK(std::abs(x(2)) < 1e-5);
}

TEST_CASE("tension: serial and parallel agree") {
  const MeshDomain m = disk_mesh(20);
  const MeshMap f = planar_map(m, [](const Vec& v) { return vec({v(0), 2.0 + v(1) + 0.3 * v(0) * v(0)}); });
  MeshMap h = f;
  h.target = ModelSpace::hyperbolic(2);
  const auto a = tension_field(m, h, false);
  const auto b = tension_field(m, h, true);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("relaxed maps compose subharmonically with a convex function") {
  const MeshDomain m = square_grid_mesh(16, 1.0);
  MeshMap f0 = planar_map(m, [](const Vec& v) {
    return vec({std::cos(3.0 * v(0)), std::sin(2.0 * v(1)), v(0) * v(1)});
  });
  const RelaxResult r = relax_to_harmonic(m, f0);
  const Vec c = vec({0.1, 0.2, -0.3});
  const SubharmonicReport s = subharmonicity_check(m, r.map, [&](const Vec& x) { return (x - c).norm(); });
  CHECK(s.min_value >= -r.residual);
  CHECK(s.interior == m.interior_vertices().size());
}

TEST_CASE("sampson step climbs the annulus leaves") {
  const Foliation F = annulus_foliation(1.0, 2.0, ModelSpace::euclidean(2));
  const MeshDomain m = disk_mesh(16, 2.5);
  const MeshMap f = planar_map(m, [](const Vec& v) { return Vec(v + vec({1.5, 0.0})); });
  const int p = nearest_vertex(m, vec({0.0, 0.0}));
  const int q = sampson_step(m, f, F, p);
  CHECK(F.signed_coord(*F.leaf_of(f.images[p]), f.images[q]) > 0.0);
  const MeshMap c = planar_map(m, [](const Vec&) { return vec({1.5, 0.0}); });
  CHECK(code_of([&] { sampson_step(m, c, F, p); }) == ErrorCode::ConstantMap);
  const MeshMap far = planar_map(m, [](const Vec& v) { return Vec(v + vec({10.0, 0.0})); });
  CHECK(code_of([&] { sampson_step(m, far, F, p); }) == ErrorCode::OutsideFoliation);
}

TEST_CASE("sweep through the annulus exits at the outer circle") {
  const Foliation F = annulus_foliation(1.0, 2.0, ModelSpace::euclidean(2));
  const MeshDomain m = disk_mesh(64, 2.5);
  const MeshMap f = planar_map(m, [](const Vec& v) { return Vec(v + vec({1.5, 0.0})); });
  const SweepTrace t = foliated_sweep(m, f, F, nearest_vertex(m, vec({0.0, 0.0})), 100.0);
  CHECK(t.outcome == SweepOutcome::ExitAtConcaveBoundary);
  CHECK(t.exit_kind == "far_leaf");
  REQUIRE(t.exit_point);
  CHECK(t.exit_point->norm() == doctest::Approx(2.0));
  CHECK(t.distance <= 0.5 + m.h);
  for (std::size_t k = 1; k < t.crossings.size(); ++k) CHECK(t.crossings[k].leaf > t.crossings[k - 1].leaf);
  CHECK(t.to_csv().rfind("step,vertex,x0,x1,leaf,cumulative_distance\n", 0) == 0);
}

TEST_CASE("sweep in a long foliation diverges past the budget") {
  const Foliation F = annulus_foliation(1.0, 1e6, ModelSpace::euclidean(2));
  const MeshDomain m = disk_mesh(32, 50.0);
  const MeshMap f = planar_map(m, [](const Vec& v) { return Vec(v + vec({3.0, 0.0})); });
  const SweepTrace t = foliated_sweep(m, f, F, nearest_vertex(m, vec({0.0, 0.0})), 10.0);
  CHECK(t.outcome == SweepOutcome::Diverging);
  CHECK(t.distance > 10.0);
}
