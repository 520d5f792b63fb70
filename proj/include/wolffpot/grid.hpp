#pragma once

#include "wolffpot/core.hpp"

#include <vector>

namespace wolffpot {

/// Regular node lattice: node(i) = origin + spacing * (i_0, ..., i_{N-1}).
/// Linear indices are row-major (last coordinate fastest).
/// The cells between neighbouring nodes form the companion cell grid.
struct Grid {
  Point origin;
  double spacing = 1.0;
  std::vector<int> counts;

  Grid() = default;
  Grid(Point origin, double spacing, std::vector<int> counts);

  /// n nodes per axis spanning [lo, hi]^dim.
  static Grid cube(int dim, double lo, double hi, int n);

  int dim() const { return static_cast<int>(counts.size()); }
  Index size() const;
  Index cell_count() const;
  std::vector<int> cell_counts() const;
  double cell_volume() const;

  Point node(Index linear) const;
  Point cell_center(Index linear) const;
  std::vector<int> unravel(Index linear) const;
  Index ravel(const std::vector<int>& multi) const;

  Point lower() const { return origin; }
  Point upper() const;
};

/// Unravel against arbitrary per-axis extents.
std::vector<int> unravel_index(Index linear, const std::vector<int>& extents);
Index product(const std::vector<int>& extents);

/// Cell averages of a nodal field (mean over the 2^N corners of each cell).
Field node_to_cell_average(const Grid& grid, const Field& nodal);

/// Multilinear interpolation of a nodal field. Points outside the grid clamp to it.
double interpolate(const Grid& grid, const Field& nodal, const Point& x);

}  // namespace wolffpot
