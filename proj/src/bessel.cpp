#include "wolffpot/potentials.hpp"
#include "wolffpot/quadrature.hpp"

#include <memory>
#include <mutex>
#include <variant>

namespace wolffpot {

double bessel_kernel(int N, double alpha, double r) {
  require(N >= 1 && alpha > 0.0, "bessel_kernel: requires alpha > 0");
  require(r >= 0.0, "bessel_kernel: negative radius");
  const double pi = EIGEN_PI;
  if (r == 0.0) {
    if (alpha <= N) return kInf;
  }
  // Integrand in u = ln t: exp(phi(u)) with a single interior maximum.
  const double k = 0.5 * (alpha - N);
  auto phi = [&](double u) { return -pi * r * r * std::exp(-u) - std::exp(u) / (4.0 * pi) + k * u; };
  // Positive root of w^2 - 2 pi (alpha - N) w - 4 pi^2 r^2, in the cancellation-free form.
  const double b = pi * (alpha - N);
  const double root = std::sqrt(b * b + 4.0 * pi * pi * r * r);
  const double w = b >= 0.0 ? b + root : 4.0 * pi * pi * r * r / (root - b);
  const double u_peak = std::log(w);
  const double peak = phi(u_peak);
  double left = 1.0, right = 1.0;
  while (phi(u_peak - left) > peak - 60.0 && left < 1e4) left *= 1.5;
  while (phi(u_peak + right) > peak - 60.0 && right < 1e4) right *= 1.5;
  auto f = [&](double u) { return std::exp(phi(u) - peak); };
  const double body = integrate<double>(f, u_peak - left, u_peak, 1e-12, 0.0, 40) +
                      integrate<double>(f, u_peak, u_peak + right, 1e-12, 0.0, 40);
  const double log_c = -0.5 * alpha * std::log(4.0 * pi) - std::lgamma(0.5 * alpha);
  return std::exp(log_c + peak) * body;
}

BesselKernelTable::BesselKernelTable(int N, double alpha, double r_min, double r_max)
    : N_(N), alpha_(alpha) {
  require(N >= 1 && alpha > 0.0 && r_min > 0.0 && r_max > r_min, "bessel table: bad arguments");
  constexpr double per_unit = 128.0;
  u0_ = std::log(r_min);
  const int n = static_cast<int>(std::ceil((std::log(r_max) - u0_) * per_unit)) + 1;
  du_ = (std::log(r_max) - u0_) / (n - 1);
  // Two extra nodes on each side feed the fourth-order slopes at the ends.
  std::vector<double> ext(n + 4);
  for (int i = 0; i < n + 4; ++i) ext[i] = std::log(bessel_kernel(N, alpha, std::exp(u0_ + (i - 2) * du_)));
  logg_.resize(n);
  slope_.resize(n);
  for (int i = 0; i < n; ++i) {
    const int k = i + 2;
    logg_[i] = ext[k];
    slope_[i] = (ext[k - 2] - 8.0 * ext[k - 1] + 8.0 * ext[k + 1] - ext[k + 2]) / (12.0 * du_);
  }
}

double BesselKernelTable::operator()(double r) const {
  const double u = (std::log(r) - u0_) / du_;
  if (!(u >= 0.0) || u >= static_cast<double>(logg_.size() - 1)) return bessel_kernel(N_, alpha_, r);
  const auto i = static_cast<std::size_t>(u);
  const double s = u - static_cast<double>(i);
  const double s2 = s * s, s3 = s2 * s;
  const double v = (2 * s3 - 3 * s2 + 1) * logg_[i] + (s3 - 2 * s2 + s) * du_ * slope_[i] +
                   (-2 * s3 + 3 * s2) * logg_[i + 1] + (s3 - s2) * du_ * slope_[i + 1];
  return std::exp(v);
}

namespace {

// The most recent table, shared by grid evaluations at one order.
std::shared_ptr<const BesselKernelTable> cached_table(int N, double alpha) {
  static std::mutex lock;
  static std::shared_ptr<const BesselKernelTable> table;
  static int cached_N = 0;
  static double cached_alpha = 0.0;
  std::lock_guard guard(lock);
  if (!table || cached_N != N || cached_alpha != alpha) {
    table = std::make_shared<const BesselKernelTable>(N, alpha);
    cached_N = N;
    cached_alpha = alpha;
  }
  return table;
}

}  // namespace

double bessel_potential(const Measure& m, double alpha, const Point& x, int cells_per_unit) {
  require(x.size() == m.dim(), "bessel_potential: dimension mismatch");
  const int N = m.dim();
  const auto table = cached_table(N, alpha);
  auto bessel_kernel = [&](int, double, double r) { return (*table)(r); };
  double total = 0.0;
  auto add_density = [&](const GridDensity& g) {
    const double vol = g.cell_volume();
    for (Index j = 0; j < static_cast<Index>(g.values.size()); ++j) {
      if (g.values[j] == 0.0) continue;
      total += g.values[j] * vol * bessel_kernel(N, alpha, (g.cell_center(j) - x).norm());
    }
  };
  for (const auto& part : m.parts()) {
    if (const auto* a = std::get_if<AtomicPart>(&part)) {
      for (std::size_t i = 0; i < a->masses.size(); ++i)
        if (a->masses[i] > 0.0) total += a->masses[i] * bessel_kernel(N, alpha, (a->locations[i] - x).norm());
    } else if (const auto* g = std::get_if<GridDensity>(&part)) {
      add_density(*g);
    } else {
      // Balls and boxes: midpoint rule on a lattice fitted to the part.
      Point lo, hi;
      if (const auto* b = std::get_if<UniformBall>(&part)) {
        lo = b->center.array() - b->radius;
        hi = b->center.array() + b->radius;
      } else {
        const auto& box = std::get<UniformBox>(part);
        lo = box.lower;
        hi = box.upper;
      }
      const double h = (hi - lo).minCoeff() / cells_per_unit;
      std::vector<int> shape(N);
      for (int d = 0; d < N; ++d) shape[d] = std::max(1, static_cast<int>(std::ceil((hi[d] - lo[d]) / h)));
      Grid lattice(lo, h, [&] {
        std::vector<int> c(shape);
        for (int& v : c) ++v;
        return c;
      }());
      const Measure single = from_part(N, part);
      const Field mass = rasterize_to_cells(single, lattice, 4);
      GridDensity cells{lo, h, shape, std::vector<double>(mass.size())};
      const double vol = std::pow(h, N);
      for (Index j = 0; j < mass.size(); ++j) cells.values[j] = mass[j] / vol;
      add_density(cells);
    }
  }
  return total;
}

}  // namespace wolffpot
