#include "wolffpot/measure.hpp"

#include "wolffpot/geometry.hpp"

#include <algorithm>

namespace wolffpot {

namespace {

double box_volume(const Point& lo, const Point& hi) {
  double vol = 1.0;
  for (Index j = 0; j < lo.size(); ++j) vol *= hi[j] - lo[j];
  return vol;
}

double ball_total(const UniformBall& b) {
  return b.density * (unit_ball_volume(static_cast<int>(b.center.size())) *
                      std::pow(b.radius, static_cast<int>(b.center.size())));
}

double box_total(const UniformBox& b) { return b.density * box_volume(b.lower, b.upper); }

double far_corner_distance(const Point& x, const Point& lo, const Point& hi) {
  double s = 0.0;
  for (Index j = 0; j < x.size(); ++j)
    s += std::max((x[j] - lo[j]) * (x[j] - lo[j]), (x[j] - hi[j]) * (x[j] - hi[j]));
  return std::sqrt(s);
}

double box_distance(const Point& x, const Point& lo, const Point& hi) {
  double s = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    if (x[j] < lo[j]) s += (lo[j] - x[j]) * (lo[j] - x[j]);
    if (x[j] > hi[j]) s += (x[j] - hi[j]) * (x[j] - hi[j]);
  }
  return std::sqrt(s);
}

// Visits grid-density cells whose centers may lie within distance t of x.
template <typename F>
void for_cells_near(const GridDensity& g, const Point& x, double t, F&& visit) {
  const int dim = static_cast<int>(g.shape.size());
  std::vector<int> first(dim), last(dim);
  for (int d = 0; d < dim; ++d) {
    if (std::isinf(t)) {
      first[d] = 0;
      last[d] = g.shape[d] - 1;
      continue;
    }
    const double a = (x[d] - t - g.origin[d]) / g.spacing - 0.5;
    const double b = (x[d] + t - g.origin[d]) / g.spacing - 0.5;
    first[d] = static_cast<int>(std::max(0.0, std::ceil(a)));
    last[d] = static_cast<int>(std::min<double>(g.shape[d] - 1, std::floor(b)));
    if (first[d] > last[d]) return;
  }
  std::vector<int> idx(first);
  Point center(dim);
  while (true) {
    Index linear = 0;
    for (int d = 0; d < dim; ++d) {
      linear = linear * g.shape[d] + idx[d];
      center[d] = g.origin[d] + g.spacing * (idx[d] + 0.5);
    }
    visit(linear, center);
    int d = dim - 1;
    while (d >= 0 && idx[d] == last[d]) {
      idx[d] = first[d];
      --d;
    }
    if (d < 0) break;
    ++idx[d];
  }
}

double grid_density_at(const GridDensity& g, const Point& x) {
  Index linear = 0;
  for (std::size_t d = 0; d < g.shape.size(); ++d) {
    const double s = std::floor((x[d] - g.origin[d]) / g.spacing);
    if (s < 0 || s >= g.shape[d]) return 0.0;
    linear = linear * g.shape[d] + static_cast<Index>(s);
  }
  return g.values[linear];
}

void check_point(const Point& p, int dim, const char* what) {
  require(p.size() == dim, std::string(what) + ": dimension mismatch");
  require(p.allFinite(), std::string(what) + ": non-finite coordinate");
}

}  // namespace

Point GridDensity::cell_center(Index linear) const {
  const auto multi = unravel_index(linear, shape);
  Point x(origin.size());
  for (Index d = 0; d < origin.size(); ++d) x[d] = origin[d] + spacing * (multi[d] + 0.5);
  return x;
}

Measure::Measure(int dim) : dim_(dim) { require(dim >= 1, "measure: dimension must be >= 1"); }

void Measure::push(MeasurePart part) { parts_.push_back(std::move(part)); }

Measure Measure::dirac(const Point& at, double mass) {
  return atomic({at}, {mass});
}

Measure Measure::atomic(std::vector<Point> locations, std::vector<double> masses) {
  require(locations.size() == masses.size(), "atomic measure: locations and masses differ in length");
  require(!locations.empty(), "atomic measure: no atoms");
  const int dim = static_cast<int>(locations.front().size());
  Measure m(dim);
  for (std::size_t i = 0; i < locations.size(); ++i) {
    check_point(locations[i], dim, "atomic measure");
    require(masses[i] >= 0.0 && std::isfinite(masses[i]), "atomic measure: masses must be finite and >= 0");
  }
  m.push(AtomicPart{std::move(locations), std::move(masses)});
  return m;
}

Measure Measure::ball_uniform(const Point& center, double radius, double density) {
  const int dim = static_cast<int>(center.size());
  Measure m(dim);
  check_point(center, dim, "ball measure");
  require(radius > 0.0 && std::isfinite(radius), "ball measure: radius must be positive");
  require(density >= 0.0 && std::isfinite(density), "ball measure: density must be finite and >= 0");
  m.push(UniformBall{center, radius, density});
  return m;
}

Measure Measure::box_uniform(const Point& lower, const Point& upper, double density) {
  const int dim = static_cast<int>(lower.size());
  Measure m(dim);
  check_point(lower, dim, "box measure");
  check_point(upper, dim, "box measure");
  require((upper.array() > lower.array()).all(), "box measure: upper must exceed lower");
  require(density >= 0.0 && std::isfinite(density), "box measure: density must be finite and >= 0");
  m.push(UniformBox{lower, upper, density});
  return m;
}

Measure Measure::grid_density(const Point& origin, double spacing, std::vector<int> shape,
                              std::vector<double> values) {
  const int dim = static_cast<int>(origin.size());
  Measure m(dim);
  check_point(origin, dim, "grid density");
  require(static_cast<int>(shape.size()) == dim, "grid density: shape dimension mismatch");
  require(spacing > 0.0 && std::isfinite(spacing), "grid density: spacing must be positive");
  for (int s : shape) require(s >= 1, "grid density: empty axis");
  require(static_cast<Index>(values.size()) == product(shape), "grid density: value count mismatch");
  for (double v : values) require(v >= 0.0 && !std::isnan(v), "grid density: values must be >= 0");
  m.push(GridDensity{origin, spacing, std::move(shape), std::move(values)});
  return m;
}

Measure Measure::on_cells(const Grid& grid, const Field& cell_density) {
  require(cell_density.size() == grid.cell_count(), "on_cells: size mismatch");
  return grid_density(grid.origin, grid.spacing, grid.cell_counts(),
                      std::vector<double>(cell_density.data(), cell_density.data() + cell_density.size()));
}

Measure& Measure::operator+=(const Measure& other) {
  require(other.dim_ == dim_, "measure add: dimension mismatch");
  for (const auto& p : other.parts_) parts_.push_back(p);
  return *this;
}

Measure add(const Measure& a, const Measure& b) {
  Measure out(a);
  out += b;
  return out;
}

Measure from_part(int dim, const MeasurePart& part) {
  return std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AtomicPart>) return Measure::atomic(p.locations, p.masses);
        else if constexpr (std::is_same_v<T, UniformBall>) return Measure::ball_uniform(p.center, p.radius, p.density);
        else if constexpr (std::is_same_v<T, UniformBox>) return Measure::box_uniform(p.lower, p.upper, p.density);
        else {
          require(static_cast<int>(p.shape.size()) == dim, "from_part: dimension mismatch");
          return Measure::grid_density(p.origin, p.spacing, p.shape, p.values);
        }
      },
      part);
}

Measure Measure::scaled(double factor) const {
  require(factor >= 0.0 && std::isfinite(factor), "measure scale: factor must be finite and >= 0");
  Measure out(*this);
  for (auto& part : out.parts_) {
    std::visit(
        [&](auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, AtomicPart>) {
            for (double& w : p.masses) w *= factor;
          } else if constexpr (std::is_same_v<T, GridDensity>) {
            for (double& v : p.values) v *= factor;
          } else {
            p.density *= factor;
          }
        },
        part);
  }
  return out;
}

double Measure::total_mass() const {
  double total = 0.0;
  for (const auto& part : parts_) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, AtomicPart>) {
            for (double w : p.masses) total += w;
          } else if constexpr (std::is_same_v<T, UniformBall>) {
            total += ball_total(p);
          } else if constexpr (std::is_same_v<T, UniformBox>) {
            total += box_total(p);
          } else {
            const double vol = p.cell_volume();
            for (double v : p.values) total += v * vol;
          }
        },
        part);
  }
  return total;
}

bool Measure::has_atoms() const {
  for (const auto& part : parts_)
    if (const auto* a = std::get_if<AtomicPart>(&part))
      for (double w : a->masses)
        if (w > 0.0) return true;
  return false;
}

bool Measure::has_continuous() const {
  for (const auto& part : parts_) {
    if (const auto* b = std::get_if<UniformBall>(&part); b && b->density > 0.0) return true;
    if (const auto* b = std::get_if<UniformBox>(&part); b && b->density > 0.0) return true;
  }
  return false;
}

double ball_mass(const Measure& m, const Point& x, double t) {
  require(x.size() == m.dim(), "ball_mass: dimension mismatch");
  require(t >= 0.0, "ball_mass: negative radius");
  if (t == 0.0) return 0.0;
  double total = 0.0;
  for (const auto& part : m.parts()) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, AtomicPart>) {
            for (std::size_t i = 0; i < p.masses.size(); ++i)
              if ((p.locations[i] - x).norm() < t) total += p.masses[i];
          } else if constexpr (std::is_same_v<T, UniformBall>) {
            const int n = static_cast<int>(x.size());
            const double d = (p.center - x).norm();
            if (d + p.radius <= t)
              total += ball_total(p);
            else
              total += p.density * ball_ball_volume(n, d, t, p.radius);
          } else if constexpr (std::is_same_v<T, UniformBox>) {
            if (far_corner_distance(x, p.lower, p.upper) <= t)
              total += box_total(p);
            else
              total += p.density * ball_box_volume(x, t, p.lower, p.upper);
          } else {
            const double vol = p.cell_volume();
            for_cells_near(p, x, t, [&](Index j, const Point& c) {
              if ((c - x).norm() < t) total += p.values[j] * vol;
            });
          }
        },
        part);
  }
  return total;
}

void point_masses(const Measure& m, const Point& x, double t_max,
                  std::vector<std::pair<double, double>>& out) {
  out.clear();
  for (const auto& part : m.parts()) {
    if (const auto* a = std::get_if<AtomicPart>(&part)) {
      for (std::size_t i = 0; i < a->masses.size(); ++i) {
        const double d = (a->locations[i] - x).norm();
        if (d < t_max && a->masses[i] > 0.0) out.emplace_back(d, a->masses[i]);
      }
    } else if (const auto* g = std::get_if<GridDensity>(&part)) {
      const double vol = g->cell_volume();
      for_cells_near(*g, x, t_max, [&](Index j, const Point& c) {
        const double d = (c - x).norm();
        if (d < t_max && g->values[j] > 0.0) out.emplace_back(d, g->values[j] * vol);
      });
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
}

double continuous_ball_mass(const Measure& m, const Point& x, double t) {
  if (t <= 0.0) return 0.0;
  const int n = m.dim();
  double total = 0.0;
  for (const auto& part : m.parts()) {
    if (const auto* b = std::get_if<UniformBall>(&part)) {
      const double d = (b->center - x).norm();
      total += d + b->radius <= t ? ball_total(*b) : b->density * ball_ball_volume(n, d, t, b->radius);
    } else if (const auto* b = std::get_if<UniformBox>(&part)) {
      total += far_corner_distance(x, b->lower, b->upper) <= t
                   ? box_total(*b)
                   : b->density * ball_box_volume(x, t, b->lower, b->upper);
    }
  }
  return total;
}

double continuous_total_mass(const Measure& m) {
  double total = 0.0;
  for (const auto& part : m.parts()) {
    if (const auto* b = std::get_if<UniformBall>(&part)) total += ball_total(*b);
    if (const auto* b = std::get_if<UniformBox>(&part)) total += box_total(*b);
  }
  return total;
}

double continuous_saturation_radius(const Measure& m, const Point& x) {
  double r = 0.0;
  for (const auto& part : m.parts()) {
    if (const auto* b = std::get_if<UniformBall>(&part))
      if (b->density > 0.0) r = std::max(r, (b->center - x).norm() + b->radius);
    if (const auto* b = std::get_if<UniformBox>(&part))
      if (b->density > 0.0) r = std::max(r, far_corner_distance(x, b->lower, b->upper));
  }
  return r;
}

std::vector<double> continuous_kinks(const Measure& m, const Point& x) {
  std::vector<double> kinks;
  for (const auto& part : m.parts()) {
    if (const auto* b = std::get_if<UniformBall>(&part)) {
      if (b->density <= 0.0) continue;
      const double d = (b->center - x).norm();
      if (std::abs(d - b->radius) > 0.0) kinks.push_back(std::abs(d - b->radius));
      kinks.push_back(d + b->radius);
    } else if (const auto* b = std::get_if<UniformBox>(&part)) {
      if (b->density <= 0.0) continue;
      for (double r : ball_box_kinks(x, b->lower, b->upper)) kinks.push_back(r);
    }
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  return kinks;
}

double density_at(const Measure& m, const Point& x) {
  double rho = 0.0;
  for (const auto& part : m.parts()) {
    if (const auto* b = std::get_if<UniformBall>(&part)) {
      if ((b->center - x).norm() < b->radius) rho += b->density;
    } else if (const auto* b = std::get_if<UniformBox>(&part)) {
      if ((x.array() >= b->lower.array()).all() && (x.array() < b->upper.array()).all()) rho += b->density;
    } else if (const auto* g = std::get_if<GridDensity>(&part)) {
      rho += grid_density_at(*g, x);
    }
  }
  return rho;
}

namespace {

// Mean of f over subsamples^N midpoints of the cell [cell_lo, cell_lo + h).
template <typename F>
double sampled_average(const Point& cell_lo, double h, int sub, F&& f) {
  const int dim = static_cast<int>(cell_lo.size());
  const Index total = static_cast<Index>(std::pow(sub, dim));
  std::vector<int> ext(dim, sub);
  double acc = 0.0;
  Point y(dim);
  for (Index k = 0; k < total; ++k) {
    const auto multi = unravel_index(k, ext);
    for (int d = 0; d < dim; ++d) y[d] = cell_lo[d] + h * (multi[d] + 0.5) / sub;
    acc += f(y);
  }
  return acc / static_cast<double>(total);
}

}  // namespace

Field rasterize_to_cells(const Measure& m, const Grid& grid, int subsamples) {
  require(grid.dim() == m.dim(), "rasterize: dimension mismatch");
  const Index n = grid.cell_count();
  const double h = grid.spacing;
  const double vol = grid.cell_volume();
  const double half_diag = 0.5 * h * std::sqrt(static_cast<double>(grid.dim()));
  Field out = Field::Zero(n);
  for (Index c = 0; c < n; ++c) {
    const Point center = grid.cell_center(c);
    const Point lo = center.array() - 0.5 * h;
    const Point hi = center.array() + 0.5 * h;
    double mass = 0.0;
    for (const auto& part : m.parts()) {
      if (const auto* b = std::get_if<UniformBox>(&part)) {
        double overlap = 1.0;
        for (Index d = 0; d < center.size(); ++d)
          overlap *= std::max(0.0, std::min(hi[d], b->upper[d]) - std::max(lo[d], b->lower[d]));
        mass += b->density * overlap;
      } else if (const auto* b = std::get_if<UniformBall>(&part)) {
        const double d = (center - b->center).norm();
        if (d + half_diag <= b->radius)
          mass += b->density * vol;
        else if (d - half_diag < b->radius)
          mass += b->density * vol * sampled_average(lo, h, subsamples, [&](const Point& y) {
                    return (y - b->center).norm() < b->radius ? 1.0 : 0.0;
                  });
      } else if (const auto* g = std::get_if<GridDensity>(&part)) {
        mass += vol * sampled_average(lo, h, subsamples, [&](const Point& y) { return grid_density_at(*g, y); });
      }
    }
    out[c] = mass;
  }
  return out;
}

AtomicPart collect_atoms(const Measure& m) {
  AtomicPart atoms;
  for (const auto& part : m.parts())
    if (const auto* a = std::get_if<AtomicPart>(&part))
      for (std::size_t i = 0; i < a->masses.size(); ++i)
        if (a->masses[i] > 0.0) {
          atoms.locations.push_back(a->locations[i]);
          atoms.masses.push_back(a->masses[i]);
        }
  return atoms;
}

Measure restrict(const Measure& m, const Point& c, double r, int cells_per_radius) {
  require(c.size() == m.dim(), "restrict: dimension mismatch");
  require(r > 0.0, "restrict: radius must be positive");
  Measure out(m.dim());
  const int dim = m.dim();
  const double h = r / cells_per_radius;

  // Resamples a density straddling the boundary of B_r(c) onto cells of size h.
  auto resample = [&](const Point& lo, const Point& hi, auto&& rho) {
    std::vector<int> shape(dim);
    Point origin(dim);
    for (int d = 0; d < dim; ++d) {
      const double a = std::max(lo[d], c[d] - r);
      const double b = std::min(hi[d], c[d] + r);
      origin[d] = a;
      shape[d] = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
    }
    const Index n = product(shape);
    std::vector<double> values(n, 0.0);
    for (Index j = 0; j < n; ++j) {
      const auto multi = unravel_index(j, shape);
      Point cell_lo(dim);
      for (int d = 0; d < dim; ++d) cell_lo[d] = origin[d] + h * multi[d];
      values[j] = sampled_average(cell_lo, h, 4, [&](const Point& y) {
        return (y - c).norm() < r ? rho(y) : 0.0;
      });
    }
    out += Measure::grid_density(origin, h, shape, std::move(values));
  };

  for (const auto& part : m.parts()) {
    if (const auto* a = std::get_if<AtomicPart>(&part)) {
      AtomicPart kept;
      for (std::size_t i = 0; i < a->masses.size(); ++i)
        if ((a->locations[i] - c).norm() < r) {
          kept.locations.push_back(a->locations[i]);
          kept.masses.push_back(a->masses[i]);
        }
      if (!kept.masses.empty()) out += Measure::atomic(kept.locations, kept.masses);
    } else if (const auto* g = std::get_if<GridDensity>(&part)) {
      GridDensity kept = *g;
      for (Index j = 0; j < static_cast<Index>(kept.values.size()); ++j)
        if ((kept.cell_center(j) - c).norm() >= r) kept.values[j] = 0.0;
      out += Measure::grid_density(kept.origin, kept.spacing, kept.shape, kept.values);
    } else if (const auto* b = std::get_if<UniformBall>(&part)) {
      const double d = (b->center - c).norm();
      if (d + b->radius <= r) {
        out += Measure::ball_uniform(b->center, b->radius, b->density);
      } else if (d == 0.0) {
        out += Measure::ball_uniform(b->center, std::min(r, b->radius), b->density);
      } else if (d < r + b->radius) {
        const Point lo = b->center.array() - b->radius;
        const Point hi = b->center.array() + b->radius;
        resample(lo, hi, [&](const Point& y) { return (y - b->center).norm() < b->radius ? b->density : 0.0; });
      }
    } else if (const auto* b = std::get_if<UniformBox>(&part)) {
      if (far_corner_distance(c, b->lower, b->upper) <= r) {
        out += Measure::box_uniform(b->lower, b->upper, b->density);
      } else if (box_distance(c, b->lower, b->upper) < r) {
        resample(b->lower, b->upper, [&](const Point& y) {
          return (y.array() >= b->lower.array()).all() && (y.array() < b->upper.array()).all() ? b->density : 0.0;
        });
      }
    }
  }
  return out;
}

}  // namespace wolffpot
