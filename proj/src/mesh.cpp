#include "hmcone/mesh.hpp"

#include "hmcone/error.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace hmcone {

std::vector<int> MeshDomain::boundary_vertices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (boundary[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> MeshDomain::interior_vertices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!boundary[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

double MeshDomain::min_weight() const {
  double w = kInfinity;
  for (const auto& e : edges) w = std::min(w, e.weight);
  return w;
}

namespace {

void finish_adjacency(MeshDomain& mesh) {
  mesh.adjacency.assign(mesh.size(), {});
  mesh.h = 0.0;
  for (const auto& e : mesh.edges) {
    mesh.adjacency[e.i].emplace_back(e.j, e.weight);
    mesh.adjacency[e.j].emplace_back(e.i, e.weight);
    mesh.h = std::max(mesh.h, (mesh.vertices[e.i] - mesh.vertices[e.j]).norm());
  }
}

double cot_at(const Vec& apex, const Vec& a, const Vec& b) {
  const Vec u = a - apex, v = b - apex;
  const double cross = std::abs(u(0) * v(1) - u(1) * v(0));
  return u.dot(v) / cross;
}

}  // namespace

MeshDomain triangle_mesh(std::vector<Vec> vertices, std::vector<std::array<int, 3>> triangles) {
  MeshDomain mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  const int n = static_cast<int>(mesh.vertices.size());
  for (const Vec& v : mesh.vertices) {
    if (v.size() != 2) throw Error(ErrorCode::InvalidMesh, "triangle meshes need planar vertex positions");
  }
  mesh.mass.assign(n, 0.0);
  std::map<std::pair<int, int>, std::pair<double, int>> edge_data;  // weight, triangle count
  for (const auto& tri : mesh.triangles) {
    for (int k : tri) {
      if (k < 0 || k >= n) throw Error(ErrorCode::InvalidMesh, "triangle index out of range");
    }
    const Vec& a = mesh.vertices[tri[0]];
    const Vec& b = mesh.vertices[tri[1]];
    const Vec& c = mesh.vertices[tri[2]];
    const Vec u = b - a, v = c - a;
    const double area = 0.5 * std::abs(u(0) * v(1) - u(1) * v(0));
    if (!(area > 1e-12)) throw Error(ErrorCode::InvalidMesh, "degenerate triangle");
    for (int k : tri) mesh.mass[k] += area / 3.0;
    for (int k = 0; k < 3; ++k) {
      const int i = tri[k], j = tri[(k + 1) % 3], o = tri[(k + 2) % 3];
      auto& slot = edge_data[{std::min(i, j), std::max(i, j)}];
      slot.first += 0.5 * cot_at(mesh.vertices[o], mesh.vertices[i], mesh.vertices[j]);
      slot.second += 1;
    }
  }
  mesh.boundary.assign(n, 0);
  for (const auto& [key, data] : edge_data) {
    if (data.second > 2) throw Error(ErrorCode::InvalidMesh, "non-manifold edge");
    if (data.second == 1) mesh.boundary[key.first] = mesh.boundary[key.second] = 1;
    mesh.edges.push_back({key.first, key.second, data.first});
  }
  for (int i = 0; i < n; ++i) {
    if (!(mesh.mass[i] > 0.0)) throw Error(ErrorCode::InvalidMesh, "isolated vertex");
  }
  finish_adjacency(mesh);
  return mesh;
}

MeshDomain square_grid_mesh(int n, double side, double x0, double y0) {
  if (n < 1 || !(side > 0.0)) throw Error(ErrorCode::InvalidMesh, "need n >= 1 and side > 0");
  std::vector<Vec> vertices;
  const double h = side / n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) vertices.push_back((Vec(2) << x0 + i * h, y0 + j * h).finished());
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return triangle_mesh(std::move(vertices), std::move(tris));
}

MeshDomain disk_mesh(int n, double radius) {
  if (n < 2 || !(radius > 0.0)) throw Error(ErrorCode::InvalidMesh, "need n >= 2 and radius > 0");
  const MeshDomain grid = square_grid_mesh(n, 2.0 * radius, -radius, -radius);
  const double lim = radius * radius * (1.0 + 1e-12);
  std::vector<int> remap(grid.size(), -1);
  std::vector<Vec> vertices;
  std::vector<std::array<int, 3>> tris;
  for (const auto& tri : grid.triangles) {
    bool inside = true;
    for (int k : tri) inside = inside && grid.vertices[k].squaredNorm() <= lim;
    if (!inside) continue;
    std::array<int, 3> t{};
    for (int k = 0; k < 3; ++k) {
      if (remap[tri[k]] < 0) {
        remap[tri[k]] = static_cast<int>(vertices.size());
        vertices.push_back(grid.vertices[tri[k]]);
      }
      t[k] = remap[tri[k]];
    }
    tris.push_back(t);
  }
  return triangle_mesh(std::move(vertices), std::move(tris));
}

MeshDomain path_mesh(int n, double length) {
  if (n < 2 || !(length > 0.0)) throw Error(ErrorCode::InvalidMesh, "need n >= 2 and length > 0");
  MeshDomain mesh;
  const double h = length / n;
  for (int i = 0; i <= n; ++i) mesh.vertices.push_back(Vec::Constant(1, i * h));
  mesh.mass.assign(n + 1, h);
  mesh.mass.front() = mesh.mass.back() = 0.5 * h;
  mesh.boundary.assign(n + 1, 0);
  mesh.boundary.front() = mesh.boundary.back() = 1;
  for (int i = 0; i < n; ++i) mesh.edges.push_back({i, i + 1, 1.0 / h});
  finish_adjacency(mesh);
  return mesh;
}

MeshDomain read_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open mesh file " + path);
  std::string header;
  in >> header;
  if (header != "OFF") throw Error(ErrorCode::InvalidMesh, "missing OFF header in " + path);
  std::size_t nv = 0, nf = 0, ne = 0;
  if (!(in >> nv >> nf >> ne)) throw Error(ErrorCode::InvalidMesh, "bad OFF counts");
  std::vector<Vec> vertices(nv);
  for (auto& v : vertices) {
    double x, y, z;
    if (!(in >> x >> y >> z)) throw Error(ErrorCode::InvalidMesh, "truncated vertex list");
    v = (Vec(2) << x, y).finished();
  }
  std::vector<std::array<int, 3>> tris(nf);
  for (auto& t : tris) {
    int k;
    if (!(in >> k >> t[0] >> t[1] >> t[2]) || k != 3) {
      throw Error(ErrorCode::InvalidMesh, "only triangular faces are supported");
    }
  }
  return triangle_mesh(std::move(vertices), std::move(tris));
}

void write_off(const MeshDomain& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path);
  out.precision(17);
  out << "OFF\n" << mesh.size() << " " << mesh.triangles.size() << " 0\n";
  for (const Vec& v : mesh.vertices) out << v(0) << " " << v(1) << " 0\n";
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

}  // namespace hmcone
