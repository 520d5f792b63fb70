#pragma once

#include "wolffpot/core.hpp"
#include "wolffpot/grid.hpp"

#include <utility>
#include <variant>
#include <vector>

namespace wolffpot {

/// Finitely many point masses.
struct AtomicPart {
  std::vector<Point> locations;
  std::vector<double> masses;
};

/// Constant density on an open ball.
struct UniformBall {
  Point center;
  double radius = 0.0;
  double density = 0.0;
};

/// Constant density on an axis-aligned box. Also serves as a background layer.
struct UniformBox {
  Point lower;
  Point upper;
  double density = 0.0;
};

/// Piecewise-constant density on cells origin + spacing * [j, j + 1).
/// A cell counts as inside a ball when its center does (cell-center rule).
struct GridDensity {
  Point origin;
  double spacing = 1.0;
  std::vector<int> shape;
  std::vector<double> values;  // row-major, one per cell

  double cell_volume() const { return std::pow(spacing, static_cast<int>(shape.size())); }
  Point cell_center(Index linear) const;
};

using MeasurePart = std::variant<AtomicPart, UniformBall, UniformBox, GridDensity>;

/// Finite nonnegative Radon measure on R^N, stored as a sum of parts.
class Measure {
 public:
  explicit Measure(int dim);

  static Measure zero(int dim) { return Measure(dim); }
  static Measure dirac(const Point& at, double mass = 1.0);
  static Measure atomic(std::vector<Point> locations, std::vector<double> masses);
  static Measure ball_uniform(const Point& center, double radius, double density);
  static Measure box_uniform(const Point& lower, const Point& upper, double density);
  static Measure grid_density(const Point& origin, double spacing, std::vector<int> shape,
                              std::vector<double> values);
  /// Cell densities on the companion cell grid of a node grid.
  static Measure on_cells(const Grid& grid, const Field& cell_density);

  int dim() const { return dim_; }
  const std::vector<MeasurePart>& parts() const { return parts_; }

  Measure& operator+=(const Measure& other);
  Measure scaled(double factor) const;

  double total_mass() const;
  bool is_zero() const { return total_mass() == 0.0; }
  bool has_atoms() const;
  /// True when balls or boxes are present (parts needing quadrature).
  bool has_continuous() const;

 private:
  void push(MeasurePart part);

  int dim_;
  std::vector<MeasurePart> parts_;
};

Measure add(const Measure& a, const Measure& b);

/// Measure consisting of a single part.
Measure from_part(int dim, const MeasurePart& part);

/// m(B_t(x)) for the open ball.
double ball_mass(const Measure& m, const Point& x, double t);

/// Restriction to the open ball B_r(c). Atoms are filtered exactly, grid cells by
/// the cell-center rule; balls and boxes are kept whole, dropped, or resampled
/// onto cells when they straddle the boundary.
Measure restrict(const Measure& m, const Point& c, double r, int cells_per_radius = 32);

/// Point masses (atoms and grid cells) at distance < t_max from x, sorted by distance.
void point_masses(const Measure& m, const Point& x, double t_max,
                  std::vector<std::pair<double, double>>& out);

/// Ball mass of the ball and box parts only.
double continuous_ball_mass(const Measure& m, const Point& x, double t);
double continuous_total_mass(const Measure& m);
/// Radius beyond which every ball/box part lies inside B_t(x). 0 if there are none.
double continuous_saturation_radius(const Measure& m, const Point& x);
/// Radii where the ball/box mass profile around x loses smoothness.
std::vector<double> continuous_kinks(const Measure& m, const Point& x);

/// Density of the non-atomic parts at x.
double density_at(const Measure& m, const Point& x);

/// Non-atomic mass of each cell of the grid. Boxes are exact; balls and grid
/// densities use subsamples^N midpoints per cell.
Field rasterize_to_cells(const Measure& m, const Grid& grid, int subsamples = 8);

/// Atoms of m gathered into one part.
AtomicPart collect_atoms(const Measure& m);

}  // namespace wolffpot
