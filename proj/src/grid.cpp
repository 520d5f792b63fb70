#include "wolffpot/grid.hpp"

#include <algorithm>

namespace wolffpot {

Grid::Grid(Point origin_, double spacing_, std::vector<int> counts_)
    : origin(std::move(origin_)), spacing(spacing_), counts(std::move(counts_)) {
  require(!counts.empty(), "grid: at least one axis required");
  require(static_cast<Index>(counts.size()) == origin.size(),
          "grid: origin dimension does not match counts");
  require(spacing > 0 && std::isfinite(spacing), "grid: spacing must be positive");
  for (int c : counts) require(c >= 2, "grid: every axis needs at least 2 nodes");
}

Grid Grid::cube(int dim, double lo, double hi, int n) {
  require(hi > lo, "grid: empty range");
  require(n >= 2, "grid: every axis needs at least 2 nodes");
  return Grid(Point::Constant(dim, lo), (hi - lo) / (n - 1), std::vector<int>(dim, n));
}

Index product(const std::vector<int>& extents) {
  Index n = 1;
  for (int e : extents) n *= e;
  return n;
}

std::vector<int> unravel_index(Index linear, const std::vector<int>& extents) {
  std::vector<int> multi(extents.size());
  for (int d = static_cast<int>(extents.size()) - 1; d >= 0; --d) {
    multi[d] = static_cast<int>(linear % extents[d]);
    linear /= extents[d];
  }
  return multi;
}

Index Grid::size() const { return product(counts); }

std::vector<int> Grid::cell_counts() const {
  std::vector<int> c(counts);
  for (int& v : c) --v;
  return c;
}

Index Grid::cell_count() const { return product(cell_counts()); }

double Grid::cell_volume() const { return std::pow(spacing, dim()); }

std::vector<int> Grid::unravel(Index linear) const { return unravel_index(linear, counts); }

Index Grid::ravel(const std::vector<int>& multi) const {
  Index linear = 0;
  for (int d = 0; d < dim(); ++d) linear = linear * counts[d] + multi[d];
  return linear;
}

Point Grid::node(Index linear) const {
  const auto multi = unravel(linear);
  Point x(dim());
  for (int d = 0; d < dim(); ++d) x[d] = origin[d] + spacing * multi[d];
  return x;
}

Point Grid::cell_center(Index linear) const {
  const auto multi = unravel_index(linear, cell_counts());
  Point x(dim());
  for (int d = 0; d < dim(); ++d) x[d] = origin[d] + spacing * (multi[d] + 0.5);
  return x;
}

Point Grid::upper() const {
  Point x(dim());
  for (int d = 0; d < dim(); ++d) x[d] = origin[d] + spacing * (counts[d] - 1);
  return x;
}

Field node_to_cell_average(const Grid& grid, const Field& nodal) {
  require(nodal.size() == grid.size(), "node_to_cell_average: field size mismatch");
  const int dim = grid.dim();
  const auto cells = grid.cell_counts();
  const Index n_cells = product(cells);
  const int corners = 1 << dim;
  Field out(n_cells);
  std::vector<int> node(dim);
  for (Index c = 0; c < n_cells; ++c) {
    const auto multi = unravel_index(c, cells);
    double sum = 0.0;
    for (int k = 0; k < corners; ++k) {
      for (int d = 0; d < dim; ++d) node[d] = multi[d] + ((k >> (dim - 1 - d)) & 1);
      sum += nodal[grid.ravel(node)];
    }
    out[c] = sum / corners;
  }
  return out;
}

double interpolate(const Grid& grid, const Field& nodal, const Point& x) {
  const int dim = grid.dim();
  std::vector<int> base(dim);
  std::vector<double> frac(dim);
  for (int d = 0; d < dim; ++d) {
    double s = (x[d] - grid.origin[d]) / grid.spacing;
    s = std::clamp(s, 0.0, static_cast<double>(grid.counts[d] - 1));
    int i = std::min(static_cast<int>(std::floor(s)), grid.counts[d] - 2);
    base[d] = i;
    frac[d] = s - i;
  }
  double value = 0.0;
  std::vector<int> node(dim);
  for (int k = 0; k < (1 << dim); ++k) {
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      const int bit = (k >> (dim - 1 - d)) & 1;
      node[d] = base[d] + bit;
      w *= bit ? frac[d] : 1.0 - frac[d];
    }
    if (w != 0.0) value += w * nodal[grid.ravel(node)];
  }
  return value;
}

}  // namespace wolffpot
