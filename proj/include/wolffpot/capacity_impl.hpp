#pragma once

namespace wolffpot {

template <typename G>
double integrate_over_set(const Grid& grid, const Field& u, const CompactSet& E, G&& g, int sub) {
  const int dim = grid.dim();
  const double h = grid.spacing;
  const double w = std::pow(h / sub, dim);
  std::vector<int> ext(dim, sub);
  const Index per_cell = product(ext);
  double total = 0.0;
  Point y(dim);
  for (Index c = 0; c < grid.cell_count(); ++c) {
    const Point center = grid.cell_center(c);
    bool near = false;
    for (const auto& b : E.balls)
      if ((center - b.center).norm() < b.radius + h * std::sqrt(static_cast<double>(dim))) near = true;
    for (const auto& b : E.boxes)
      if ((center.array() >= b.lower.array() - h).all() && (center.array() <= b.upper.array() + h).all()) near = true;
    if (!near) continue;
    for (Index k = 0; k < per_cell; ++k) {
      const auto multi = unravel_index(k, ext);
      for (int d = 0; d < dim; ++d) y[d] = center[d] - 0.5 * h + h * (multi[d] + 0.5) / sub;
      if (E.contains(y)) total += g(interpolate(grid, u, y)) * w;
    }
  }
  return total;
}

}  // namespace wolffpot
