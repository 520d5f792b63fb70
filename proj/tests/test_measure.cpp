#include <doctest.h>

#include "wolffpot/geometry.hpp"
#include "wolffpot/measure.hpp"

#include <random>

using namespace wolffpot;

namespace {

Point p2(double a, double b) { return Eigen::Vector2d(a, b); }
Point p3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

// Plane lens area of two discs, textbook formula.
double lens_area(double d, double r1, double r2) {
  const double a = r1 * r1 * std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
  const double b = r2 * r2 * std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
  const double c = 0.5 * std::sqrt((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2));
  return a + b - c;
}

// Spatial lens volume of two balls.
double lens_volume(double d, double r1, double r2) {
  const double s = r1 + r2 - d;
  return EIGEN_PI * s * s * (d * d + 2 * d * (r1 + r2) - 3 * (r1 - r2) * (r1 - r2)) / (12 * d);
}

}  // namespace

TEST_CASE("ball_mass of atoms uses open balls") {
  const Measure m = Measure::dirac(p2(0, 0));
  CHECK(ball_mass(m, p2(0, 0), 0.5) == 1.0);
  CHECK(ball_mass(m, p2(0.5, 0), 0.5) == 0.0);
  CHECK(ball_mass(m, p2(0.5, 0), 0.5000001) == 1.0);
}

TEST_CASE("ball_mass of a uniform ball saturates at its volume") {
  const Measure m = Measure::ball_uniform(p3(0, 0, 0), 1.0, 1.0);
  CHECK(ball_mass(m, p3(0, 0, 0), 2.0) == doctest::Approx(4.0 * EIGEN_PI / 3.0).epsilon(1e-14));
  CHECK(ball_mass(m, p3(0, 0, 0), 2.0) == m.total_mass());
}

TEST_CASE("thin caps keep relative accuracy") {
  // Spherical cap in R^3: pi H^2 (3R - H) / 3, free of cancellation.
  for (double H : {1e-12, 1e-8, 1e-4, 0.3, 1.0, 1.7, 2.0}) {
    const double exact = EIGEN_PI * H * H * (3.0 - H) / 3.0;
    CHECK(cap_volume(3, 1.0, H) == doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK(cap_volume(1, 1.0, 0.25) == 0.25);
  // A tiny ball centred on a sphere sees half its volume, up to O(t).
  for (double t : {1e-9, 1e-6}) {
    const double half = 2.0 * EIGEN_PI / 3.0 * t * t * t;
    CHECK(ball_ball_volume(3, 0.5, t, 0.5) == doctest::Approx(half).epsilon(4 * t));
  }
}

TEST_CASE("ball-ball intersection matches lens formulas") {
  for (double d : {0.45, 0.9, 1.4}) {
    CHECK(ball_ball_volume(2, d, 1.0, 0.7) == doctest::Approx(lens_area(d, 1.0, 0.7)).epsilon(1e-12));
    CHECK(ball_ball_volume(3, d, 1.0, 0.7) == doctest::Approx(lens_volume(d, 1.0, 0.7)).epsilon(1e-12));
  }
  CHECK(ball_ball_volume(3, 2.0, 1.0, 0.7) == 0.0);
  CHECK(ball_ball_volume(2, 0.1, 1.0, 0.2) == doctest::Approx(EIGEN_PI * 0.04).epsilon(1e-14));
}

TEST_CASE("ball-box intersection against closed forms") {
  // Disc against a vertical strip |x| < a.
  const double a = 0.3, t = 1.0;
  const double strip = 2.0 * (a * std::sqrt(t * t - a * a) + t * t * std::asin(a / t));
  CHECK(ball_box_volume(p2(0, 0), t, p2(-a, -5), p2(a, 5)) == doctest::Approx(strip).epsilon(1e-9));
  // Ball against a slab |z| < a.
  const double slab = 2.0 * EIGEN_PI * (t * t * a - a * a * a / 3.0);
  CHECK(ball_box_volume(p3(0, 0, 0), t, p3(-5, -5, -a), p3(5, 5, a)) == doctest::Approx(slab).epsilon(1e-9));
  // Corner of an octant.
  CHECK(ball_box_volume(p3(0, 0, 0), 0.5, p3(0, 0, 0), p3(3, 3, 3)) ==
        doctest::Approx(EIGEN_PI * 0.125 / 6.0).epsilon(1e-9));
}

TEST_CASE("ball-box intersection against fine sampling") {
  const Point x = p2(0.13, -0.21), lo = p2(-0.2, -0.5), hi = p2(0.4, 0.1);
  const double t = 0.37;
  const int n = 4000;
  double hits = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = lo[0] + (hi[0] - lo[0]) * (i + 0.5) / n;
      const double v = lo[1] + (hi[1] - lo[1]) * (j + 0.5) / n;
      if ((p2(u, v) - x).norm() < t) hits += 1;
    }
  const double sampled = hits / (double(n) * n) * (hi - lo).prod();
  CHECK(ball_box_volume(x, t, lo, hi) == doctest::Approx(sampled).epsilon(1e-4));
}

TEST_CASE("ball_mass is monotone in t, additive, and saturates exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Measure a = Measure::atomic({p2(0.1, 0.2), p2(-0.4, 0.3)}, {0.5, 2.0});
  Measure b = Measure::ball_uniform(p2(0.2, -0.1), 0.4, 1.5);
  b += Measure::box_uniform(p2(-0.6, -0.6), p2(-0.1, 0.2), 0.7);
  b += Measure::grid_density(p2(0.0, 0.0), 0.1, {4, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  const Measure sum = add(a, b);
  for (int k = 0; k < 200; ++k) {
    const Point x = p2(u(rng), u(rng));
    double t1 = std::abs(u(rng)) * 2, t2 = std::abs(u(rng)) * 2;
    if (t1 > t2) std::swap(t1, t2);
    CHECK(ball_mass(sum, x, t1) <= ball_mass(sum, x, t2) * (1 + 1e-12));
    const double lhs = ball_mass(sum, x, t2);
    const double rhs = ball_mass(a, x, t2) + ball_mass(b, x, t2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  for (int k = 0; k < 20; ++k) {
    const Point x = p2(u(rng), u(rng));
    CHECK(ball_mass(sum, x, 10.0) == sum.total_mass());
  }
}

TEST_CASE("restrict filters atoms and commutes with ball_mass for atomic measures") {
  const Measure m = Measure::atomic({p2(0, 0), p2(2, 0)}, {1.0, 1.0});
  const Measure r = restrict(m, p2(0, 0), 1.0);
  CHECK(r.total_mass() == 1.0);
  CHECK(ball_mass(r, p2(0, 0), 0.1) == 1.0);
  CHECK(restrict(Measure::zero(2), p2(0, 0), 1.0).is_zero());

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> locs;
  std::vector<double> masses;
  for (int i = 0; i < 30; ++i) {
    locs.push_back(p2(u(rng), u(rng)));
    masses.push_back(std::abs(u(rng)));
  }
  const Measure atoms = Measure::atomic(locs, masses);
  const Point c = p2(0.1, -0.2);
  const Measure ra = restrict(atoms, c, 0.6);
  for (int k = 0; k < 50; ++k) {
    const Point x = p2(u(rng), u(rng));
    const double t = std::abs(u(rng));
    double expected = 0.0;
    for (std::size_t i = 0; i < locs.size(); ++i)
      if ((locs[i] - c).norm() < 0.6 && (locs[i] - x).norm() < t) expected += masses[i];
    CHECK(ball_mass(ra, x, t) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("restrict of densities keeps interior parts whole") {
  const Measure inside = Measure::ball_uniform(p2(0.1, 0), 0.2, 3.0);
  CHECK(restrict(inside, p2(0, 0), 1.0).total_mass() == doctest::Approx(inside.total_mass()));
  const Measure box = Measure::box_uniform(p2(-1, -1), p2(1, 1), 1.0);
  // The restriction of Lebesgue measure to B_r has mass pi r^2 up to resampling error.
  CHECK(restrict(box, p2(0, 0), 0.5).total_mass() == doctest::Approx(EIGEN_PI * 0.25).epsilon(5e-3));
}

TEST_CASE("add concatenates and coincident atoms behave like one") {
  const Measure one = Measure::dirac(p2(0, 0), 1.0);
  const Measure two = add(one, one);
  CHECK(ball_mass(two, p2(0.1, 0), 0.2) == 2.0);
  CHECK(add(one, Measure::zero(2)).total_mass() == 1.0);
  CHECK_THROWS_AS(add(one, Measure::zero(3)), InvalidArgument);
}

TEST_CASE("constructors reject malformed input") {
  CHECK_THROWS_AS(Measure::dirac(p2(0, 0), -1.0), InvalidArgument);
  CHECK_THROWS_AS(Measure::atomic({p2(0, 0), p3(0, 0, 0)}, {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(Measure::ball_uniform(p2(0, 0), -0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Measure::box_uniform(p2(0, 0), p2(-1, 1), 1.0), InvalidArgument);
  CHECK_THROWS_AS(Measure::grid_density(p2(0, 0), 0.1, {2, 2}, {1, 2, 3}), InvalidArgument);
  CHECK_THROWS_AS(ball_mass(Measure::zero(2), p3(0, 0, 0), 1.0), InvalidArgument);
}

TEST_CASE("rasterize_to_cells conserves box mass and approximates balls") {
  const Grid grid = Grid::cube(2, -1.0, 1.0, 21);
  const Measure box = Measure::box_uniform(p2(-0.33, -0.5), p2(0.41, 0.27), 2.0);
  CHECK(rasterize_to_cells(box, grid).sum() == doctest::Approx(box.total_mass()).epsilon(1e-13));
  const Measure ball = Measure::ball_uniform(p2(0.05, 0.1), 0.5, 1.0);
  CHECK(rasterize_to_cells(ball, grid).sum() == doctest::Approx(ball.total_mass()).epsilon(2e-3));
}
