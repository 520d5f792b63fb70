#include <doctest.h>

#include "wolffpot/geometry.hpp"
#include "wolffpot/parallel.hpp"
#include "wolffpot/potentials.hpp"

#include <algorithm>
#include <random>

using namespace wolffpot;

namespace {

Point p2(double a, double b) { return Eigen::Vector2d(a, b); }
Point p3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

PotentialParams params(int N, double alpha, double s, double T, double eta = 0.0) {
  PotentialParams pp;
  pp.dim = N;
  pp.alpha = alpha;
  pp.s = s;
  pp.T = T;
  pp.eta = eta;
  return pp;
}

// Composite Simpson in log t of (m(t))^e t^{-gamma}, an independent oracle.
template <typename Mass>
double simpson_log(Mass&& mass, double t0, double T, double e, double gamma, int n) {
  const double a = std::log(t0), b = std::log(T);
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double u = a + k * h;
    const double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
    sum += w * std::pow(mass(std::exp(u)), e) * std::exp(-gamma * u);
  }
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("h_eta branches") {
  CHECK(h_eta(0.3, 0.0) == 1.0);
  CHECK(h_eta(7.0, 0.0) == 1.0);
  CHECK(h_eta(0.5, 1.7) == doctest::Approx(std::pow(std::log(2.0), -1.7)).epsilon(1e-15));
  CHECK(h_eta(std::exp(-1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("wolff of a Dirac mass") {
  const Measure d = Measure::dirac(p3(0, 0, 0));
  CHECK(wolff(d, params(3, 1, 2, 1), p3(0.5, 0, 0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wolff(Measure::zero(3), params(3, 1, 2, 1), p3(0.5, 0, 0)) == 0.0);
  CHECK(wolff(d, params(3, 1, 2, 1), p3(1.0, 0, 0)) == 0.0);
  CHECK(wolff(d, params(3, 1, 2, 1), p3(0, 0, 0)) == kInf);
  // Mass scaling by m^{1/(s-1)}.
  const Measure d8 = Measure::dirac(p3(0, 0, 0), 8.0);
  CHECK(wolff(d8, params(3, 0.5, 4, 2), p3(0.3, 0.1, 0)) ==
        doctest::Approx(2.0 * wolff(d, params(3, 0.5, 4, 2), p3(0.3, 0.1, 0))).epsilon(1e-13));
}

TEST_CASE("riesz of a Dirac mass matches the kernel normalization") {
  const Measure d = Measure::dirac(p3(0, 0, 0));
  CHECK(riesz(d, params(3, 2, 2, kInf), p3(2, 0, 0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(riesz(Measure::zero(3), params(3, 2, 2, kInf), p3(2, 0, 0)) == 0.0);
  CHECK(riesz(d, params(3, 2, 2, 1.5), p3(2, 0, 0)) == 0.0);
}

TEST_CASE("wolff of uniform densities against closed forms") {
  // Interior point of a box with B_T inside: W = (rho |B1|)^e T^kappa / kappa.
  const int N = 3;
  const double rho = 2.5, alpha = 0.6, s = 2.5, T = 0.3;
  const Measure box = Measure::box_uniform(p3(-1, -1, -1), p3(1, 1, 1), rho);
  const double e = 1 / (s - 1), kappa = alpha * s / (s - 1);
  const double expected = std::pow(rho * unit_ball_volume(N), e) * std::pow(T, kappa) / kappa;
  CHECK(wolff(box, params(N, alpha, s, T), p3(0.1, -0.2, 0.3)) == doctest::Approx(expected).epsilon(1e-9));

  // Center of a uniform ball, untruncated.
  const double r = 0.7;
  const Measure ball = Measure::ball_uniform(p3(0, 0, 0), r, rho);
  const double gamma = (N - alpha * s) / (s - 1);
  const double centered = std::pow(rho * unit_ball_volume(N), e) * std::pow(r, kappa) * (1 / kappa + 1 / gamma);
  CHECK(wolff(ball, params(N, alpha, s, kInf), p3(0, 0, 0)) == doctest::Approx(centered).epsilon(1e-9));
}

TEST_CASE("wolff of an off-center uniform disc against an independent quadrature") {
  const double r = 0.5, rho = 1.3, alpha = 0.4, s = 3.0, T = 2.0;
  const Point c = p2(0.2, 0.1), x = p2(-0.15, 0.3);
  const Measure ball = Measure::ball_uniform(c, r, rho);
  const double d = (x - c).norm();
  auto mass = [&](double t) {
    // Only called for r - d <= t <= r + d, where the lens formula applies.
    const double a1 = t * t * std::acos(std::clamp((d * d + t * t - r * r) / (2 * d * t), -1.0, 1.0));
    const double a2 = r * r * std::acos(std::clamp((d * d + r * r - t * t) / (2 * d * r), -1.0, 1.0));
    const double a3 = 0.5 * std::sqrt(std::max(0.0, (-d + t + r) * (d + t - r) * (d - t + r) * (d + t + r)));
    return rho * (a1 + a2 - a3);
  };
  const double e = 1 / (s - 1), gamma = (2 - alpha * s) / (s - 1);
  // The profile is pi rho t^2 below r - d, so the lower piece is exact.
  const double t0 = r - d;
  const double low = std::pow(rho * EIGEN_PI, e) * std::pow(t0, 2 * e - gamma) / (2 * e - gamma);
  const double k1 = d + r;
  const double oracle = low + simpson_log(mass, t0, k1, e, gamma, 200000) +
                        std::pow(rho * EIGEN_PI * r * r, e) * (std::pow(k1, -gamma) - std::pow(T, -gamma)) / gamma;
  CHECK(wolff(ball, params(2, alpha, s, T), x) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("p = 2 reduction to the Riesz potential of order 2 alpha") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Point> locs;
    std::vector<double> ms;
    for (int i = 0; i < 8; ++i) {
      locs.push_back(p3(u(rng), u(rng), u(rng)));
      ms.push_back(0.1 + std::abs(u(rng)));
    }
    const Measure m = Measure::atomic(locs, ms);
    const Point x = p3(u(rng), u(rng), u(rng));
    const double alpha = 0.2 + 0.6 * std::abs(u(rng));
    const double T = 0.5 + std::abs(u(rng));
    const double w = wolff(m, params(3, alpha, 2, T), x);
    const double i = riesz(m, params(3, 2 * alpha, 2, T), x);
    CHECK(w == doctest::Approx(i).epsilon(1e-14));
  }
  const Measure box = Measure::box_uniform(p2(-0.3, -0.2), p2(0.4, 0.5), 1.7);
  CHECK(wolff(box, params(2, 0.45, 2, 1.2), p2(0.5, 0.1)) ==
        doctest::Approx(riesz(box, params(2, 0.9, 2, 1.2), p2(0.5, 0.1))).epsilon(1e-8));
}

TEST_CASE("frac_maximal examples") {
  const Measure lebesgue = Measure::box_uniform(p3(-3, -3, -3), p3(3, 3, 3), 1.0);
  CHECK(frac_maximal(lebesgue, params(3, 2, 2, 1), p3(0.1, 0.2, 0)) ==
        doctest::Approx(4.0 * EIGEN_PI / 3.0).epsilon(1e-10));
  // Grid density equal to one: the cell-center rule approximates Lebesgue measure.
  std::vector<double> ones(60 * 60 * 60, 1.0);
  const Measure cells = Measure::grid_density(p3(-1.5, -1.5, -1.5), 0.05, {60, 60, 60}, ones);
  CHECK(frac_maximal(cells, params(3, 2, 2, 1), p3(0.013, 0.021, 0.007)) ==
        doctest::Approx(4.0 * EIGEN_PI / 3.0).epsilon(1e-2));
  const Measure d = Measure::dirac(p3(0, 0, 0));
  CHECK(frac_maximal(d, params(3, 2, 2, 1), p3(0.5, 0, 0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(frac_maximal(d, params(3, 2, 2, 1), p3(0, 0, 0)) == kInf);
}

TEST_CASE("frac_maximal with a logarithmic weight finds the interior maximum") {
  // For constant density c, the ratio is c |B1| t^alpha (-ln t)^eta on t <= 1/2,
  // maximal at t = exp(-eta/alpha) when that lies below T.
  const double c = 0.8, alpha = 1.0, eta = 1.0, T = 0.45;
  const Measure box = Measure::box_uniform(p2(-3, -3), p2(3, 3), c);
  const double expected = c * unit_density_maximal_norm(2, alpha, T, eta);
  CHECK(frac_maximal(box, params(2, alpha, 2, T, eta), p2(0.1, 0)) == doctest::Approx(expected).epsilon(1e-9));
  const double ts = std::exp(-eta / alpha);
  CHECK(expected == doctest::Approx(c * EIGEN_PI * ts * std::pow(-std::log(ts), eta)).epsilon(1e-14));
}

TEST_CASE("frac_maximal_sup_norm") {
  const Grid probes = Grid::cube(2, -0.5, 0.5, 11);
  CHECK(frac_maximal_sup_norm(Measure::dirac(p2(0.33, 0.1)), params(2, 1, 2, 1), probes).value == kInf);
  CHECK(frac_maximal_sup_norm(Measure::zero(2), params(2, 1, 2, 1), probes).value == 0.0);
  const Measure box = Measure::box_uniform(p2(-4, -4), p2(4, 4), 0.3);
  const auto est = frac_maximal_sup_norm(box, params(2, 1, 2, 1), probes);
  CHECK(est.value == doctest::Approx(0.3 * EIGEN_PI).epsilon(1e-10));
  CHECK(est.lower_estimate);
}

TEST_CASE("bessel kernel") {
  // N = 3, alpha = 2 is the Yukawa kernel exp(-r)/(4 pi r).
  for (double r : {0.01, 0.3, 1.0, 4.0, 15.0})
    CHECK(bessel_kernel(3, 2.0, r) == doctest::Approx(std::exp(-r) / (4 * EIGEN_PI * r)).epsilon(1e-9));

  // Unit mass: integrate the radial profile with a log-spaced Simpson rule.
  for (auto [N, alpha] : {std::pair{2, 1.0}, std::pair{3, 1.5}, std::pair{2, 0.6}}) {
    const double area = N * unit_ball_volume(N);
    auto radial = [&](double r) { return area * std::pow(r, N) * bessel_kernel(N, alpha, r); };
    const int n = 4000;
    const double a = std::log(1e-10), b = std::log(60.0), h = (b - a) / n;
    double sum = 0;
    for (int k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
      sum += w * radial(std::exp(a + k * h));
    }
    CHECK(sum * h / 3 == doctest::Approx(1.0).epsilon(1e-6));
  }

  // Singular like the Riesz kernel at the origin.
  const double c1 = bessel_kernel(2, 1.0, 1e-4) * 1e-4;
  const double c2 = bessel_kernel(2, 1.0, 1e-6) * 1e-6;
  CHECK(c1 == doctest::Approx(c2).epsilon(1e-3));
  CHECK(bessel_kernel(2, 1.0, 0.0) == kInf);
  CHECK(bessel_potential(Measure::zero(2), 1.0, p2(0, 0)) == 0.0);
}

TEST_CASE("tabulated bessel kernel") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> logr(std::log(1e-7), std::log(80.0));
  for (auto [N, alpha] : {std::pair{2, 1.0}, std::pair{3, 2.0}, std::pair{2, 2.5}}) {
    const BesselKernelTable table(N, alpha);
    for (int k = 0; k < 300; ++k) {
      const double r = std::exp(logr(rng));
      CHECK(table(r) == doctest::Approx(bessel_kernel(N, alpha, r)).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(BesselKernelTable(2, 1.0, 1.0, 0.5), InvalidArgument);
}

TEST_CASE("cell operator matches the generic evaluator") {
  const Grid grid = Grid::cube(2, -1.0, 1.0, 9);
  Field mass(grid.cell_count());
  for (Index c = 0; c < mass.size(); ++c) mass[c] = 0.01 * (1 + c % 5);
  const Measure cells = Measure::on_cells(grid, mass / grid.cell_volume());
  const auto pp = params(2, 0.5, 2.5, 0.9);
  const Field fast = CellPotentialOperator::wolff(grid, pp).apply(mass);
  const Field slow = grid_eval(PotentialKind::wolff, cells, pp, grid);
  for (Index i = 0; i < fast.size(); ++i) CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
}

TEST_CASE("grid evaluation is independent of the thread count") {
  const Grid grid = Grid::cube(2, -1.0, 1.0, 13);
  Measure m = Measure::ball_uniform(p2(0.1, 0.0), 0.4, 1.0);
  m += Measure::dirac(p2(0.33, -0.41), 0.2);
  const auto pp = params(2, 0.5, 3.0, 1.0);
  set_thread_count(1);
  const Field one = grid_eval(PotentialKind::wolff, m, pp, grid);
  set_thread_count(4);
  const Field four = grid_eval(PotentialKind::wolff, m, pp, grid);
  set_thread_count(1);
  CHECK((one == four).all());
}

TEST_CASE("parameter checks") {
  const Measure d = Measure::dirac(p2(0, 0));
  CHECK_THROWS_AS(wolff(d, params(2, 1.0, 2.0, 1.0), p2(1, 0)), InvalidArgument);
  CHECK_THROWS_AS(wolff(d, params(2, 0.5, 1.0, 1.0), p2(1, 0)), InvalidArgument);
  CHECK_THROWS_AS(riesz(d, params(2, 2.0, 2.0, 1.0), p2(1, 0)), InvalidArgument);
  CHECK_THROWS_AS(wolff(d, params(3, 0.5, 2.0, 1.0), p2(1, 0)), InvalidArgument);
}
