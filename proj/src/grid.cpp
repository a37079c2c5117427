#include "hmcone/grid.hpp"

#include <numeric>

namespace hmcone {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

}  // namespace

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int c : cells) n *= static_cast<std::size_t>(c);
  return n;
}

Vec GridSpec::cell_width() const {
  Vec w(dim());
  for (int i = 0; i < dim(); ++i) w(i) = (hi(i) - lo(i)) / cells[i];
  return w;
}

std::vector<int> GridSpec::unflatten(std::size_t index) const {
  std::vector<int> ijk(cells.size());
  for (std::size_t a = 0; a < cells.size(); ++a) {
    ijk[a] = static_cast<int>(index % cells[a]);
    index /= cells[a];
  }
  return ijk;
}

Vec GridSpec::cell_center(std::size_t index) const {
  const auto ijk = unflatten(index);
  const Vec w = cell_width();
  Vec c(dim());
  for (int a = 0; a < dim(); ++a) c(a) = lo(a) + (ijk[a] + 0.5) * w(a);
  return c;
}

Vec GridSpec::cell_corner(std::size_t index, unsigned corner_bits) const {
  const auto ijk = unflatten(index);
  const Vec w = cell_width();
  Vec c(dim());
  for (int a = 0; a < dim(); ++a) {
    c(a) = lo(a) + (ijk[a] + ((corner_bits >> a) & 1u)) * w(a);
  }
  return c;
}

std::size_t GridSpec::locate(const Vec& c) const {
  const Vec w = cell_width();
  std::size_t index = 0;
  std::size_t stride = 1;
  for (int a = 0; a < dim(); ++a) {
    const double rel = (c(a) - lo(a)) / w(a);
    if (!(rel >= 0.0) || rel >= cells[a]) return size();
    index += static_cast<std::size_t>(rel) * stride;
    stride *= static_cast<std::size_t>(cells[a]);
  }
  return index;
}

GridSpec GridSpec::uniform(const Vec& lo, const Vec& hi, int per_axis) {
  GridSpec g;
  g.lo = lo;
  g.hi = hi;
  g.cells.assign(static_cast<std::size_t>(lo.size()), per_axis);
  return g;
}

GridComponents label_components(const GridSpec& grid, const std::vector<char>& active) {
  const std::size_t n = grid.size();
  UnionFind uf(n);
  std::vector<std::size_t> stride(grid.cells.size());
  std::size_t s = 1;
  for (std::size_t a = 0; a < grid.cells.size(); ++a) {
    stride[a] = s;
    s *= static_cast<std::size_t>(grid.cells[a]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    const auto ijk = grid.unflatten(i);
    for (std::size_t a = 0; a < grid.cells.size(); ++a) {
      if (ijk[a] > 0 && active[i - stride[a]]) uf.unite(i, i - stride[a]);
    }
  }
  GridComponents out;
  out.label.assign(n, -1);
  std::vector<int> root_label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    const std::size_t r = uf.find(i);
    if (root_label[r] < 0) {
      root_label[r] = out.count++;
      out.sizes.push_back(0);
      out.touches_border.push_back(false);
    }
    const int l = root_label[r];
    out.label[i] = l;
    ++out.sizes[l];
    const auto ijk = grid.unflatten(i);
    for (std::size_t a = 0; a < grid.cells.size(); ++a) {
      if (ijk[a] == 0 || ijk[a] == grid.cells[a] - 1) out.touches_border[l] = true;
    }
  }
  return out;
}

std::vector<char> erode(const GridSpec& grid, const std::vector<char>& active) {
  std::vector<std::size_t> stride(grid.cells.size());
  std::size_t s = 1;
  for (std::size_t a = 0; a < grid.cells.size(); ++a) {
    stride[a] = s;
    s *= static_cast<std::size_t>(grid.cells[a]);
  }
  std::vector<char> out(active.size(), 0);
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (!active[i]) continue;
    const auto ijk = grid.unflatten(i);
    bool keep = true;
    for (std::size_t a = 0; a < grid.cells.size() && keep; ++a) {
      keep = ijk[a] > 0 && ijk[a] + 1 < grid.cells[a] && active[i - stride[a]] && active[i + stride[a]];
    }
    out[i] = keep ? 1 : 0;
  }
  return out;
}

}  // namespace hmcone
