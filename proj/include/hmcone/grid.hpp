#pragma once

#include "hmcone/ambient.hpp"

#include <cstddef>
#include <vector>

namespace hmcone {

/// Axis-aligned cell grid over a box in chart coordinates.
struct GridSpec {
  Vec lo;
  Vec hi;
  std::vector<int> cells;  // per axis

  std::size_t size() const;
  int dim() const { return static_cast<int>(cells.size()); }
  Vec cell_center(std::size_t index) const;
  Vec cell_corner(std::size_t index, unsigned corner_bits) const;
  Vec cell_width() const;
  std::vector<int> unflatten(std::size_t index) const;
  /// Index of the cell containing c, or size() if outside the box.
  std::size_t locate(const Vec& c) const;

  static GridSpec uniform(const Vec& lo, const Vec& hi, int per_axis);
};

struct GridComponents {
  std::vector<int> label;  // -1 for inactive cells
  int count = 0;
  std::vector<std::size_t> sizes;
  std::vector<bool> touches_border;
};

/// Face-connected components of the active cells, labelled in order of their
/// lowest cell index.
GridComponents label_components(const GridSpec& grid, const std::vector<char>& active);

/// Active cells whose face neighbours all exist and are active.
std::vector<char> erode(const GridSpec& grid, const std::vector<char>& active);

}  // namespace hmcone
