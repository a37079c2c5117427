#pragma once

#include "hmcone/ambient.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace hmcone {

struct MeshEdge {
  int i = 0;
  int j = 0;
  double weight = 0.0;
};

/// Triangulated (or one-dimensional path) domain with cotangent weights and lumped masses.
struct MeshDomain {
  std::vector<Vec> vertices;  // positions in a reference chart
  std::vector<std::array<int, 3>> triangles;
  std::vector<MeshEdge> edges;
  std::vector<double> mass;
  std::vector<char> boundary;
  std::vector<std::vector<std::pair<int, double>>> adjacency;  // (neighbour, weight)
  double h = 0.0;  // longest edge

  std::size_t size() const { return vertices.size(); }
  std::vector<int> boundary_vertices() const;
  std::vector<int> interior_vertices() const;
  double min_weight() const;
};

/// Builds edges, weights 1/2 (cot a + cot b), barycentric masses and boundary flags.
/// Throws InvalidMesh on bad indices or triangles with area <= 1e-12.
MeshDomain triangle_mesh(std::vector<Vec> vertices, std::vector<std::array<int, 3>> triangles);

/// n x n cells over [x0, x0 + side] x [y0, y0 + side], each split along the same diagonal.
MeshDomain square_grid_mesh(int n, double side = 1.0, double x0 = 0.0, double y0 = 0.0);
/// n x n grid over [-radius, radius]^2 keeping triangles with all vertices in the closed disk.
MeshDomain disk_mesh(int n, double radius = 1.0);
/// Path graph with n segments on [0, length]: weights 1/h, masses h (h/2 at the ends).
MeshDomain path_mesh(int n, double length = 1.0);

MeshDomain read_off(const std::string& path);
void write_off(const MeshDomain& mesh, const std::string& path);

}  // namespace hmcone
