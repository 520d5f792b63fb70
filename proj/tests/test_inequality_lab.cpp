#include <doctest.h>

#include "wolffpot/inequality_lab.hpp"

#include <random>

using namespace wolffpot;

namespace {

Point p2(double a, double b) { return Eigen::Vector2d(a, b); }

PotentialParams params(int N, double alpha, double p, double T) {
  PotentialParams pp;
  pp.dim = N;
  pp.alpha = alpha;
  pp.s = p;
  pp.T = T;
  return pp;
}

Measure random_atoms(std::mt19937& rng, int count) {
  std::uniform_real_distribution<double> pos(-0.8, 0.8), mass(0.1, 2.0);
  std::vector<Point> where;
  std::vector<double> w;
  for (int k = 0; k < count; ++k) {
    where.push_back(p2(pos(rng), pos(rng)));
    w.push_back(mass(rng));
  }
  return Measure::atomic(where, w);
}

}  // namespace

TEST_CASE("sandwich collapses at p = 2") {
  std::mt19937 rng(5);
  const Grid g = Grid::cube(2, -1.0, 1.0, 12);  // even count keeps nodes off the random atoms
  for (int trial = 0; trial < 5; ++trial) {
    const Measure m = random_atoms(rng, 1 + trial);
    const auto rep = sandwich(m, params(2, 0.4, 2.0, 0.7), 1.5, SandwichVariant::wolff_riesz, g);
    REQUIRE_FALSE(rep.degenerate);
    CHECK(rep.mid_integral == doctest::Approx(rep.lhs_integral).epsilon(1e-10));
    CHECK(rep.implied_lower_c == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.implied_upper_c == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("sandwich integrals against a node-sum oracle") {
  // One atom of mass w: W = w^e (d^{-gamma} - T^{-gamma}) / gamma with e = 1/(p-1),
  // gamma = (N - alpha p)/(p-1); the Riesz side is the e = 1 case.
  const int N = 2;
  const double alpha = 0.3, p = 3.0, T = 1.2, q = 2.0;
  const Point y = p2(0.013, -0.027);
  const Measure m = Measure::dirac(y, 0.8);
  const Grid g = Grid::cube(2, -1.0, 1.0, 9);
  const double e = 1.0 / (p - 1.0);
  const double gamma = (N - alpha * p) / (p - 1.0);
  double wolff_sum = 0.0, riesz_sum = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    const double d = (g.node(i) - y).norm();
    if (d >= T) continue;
    const double w = std::pow(0.8, e) * (std::pow(d, -gamma) - std::pow(T, -gamma)) / gamma;
    const double gr = N - alpha * p;
    const double r = 0.8 * (std::pow(d, -gr) - std::pow(T, -gr)) / gr;
    wolff_sum += std::pow(w, q);
    riesz_sum += std::pow(r, q / (p - 1.0));
  }
  const double vol = g.cell_volume();
  const auto rep = sandwich(m, params(N, alpha, p, T), q, SandwichVariant::wolff_riesz, g);
  CHECK(rep.mid_integral == doctest::Approx(wolff_sum * vol).epsilon(1e-10));
  CHECK(rep.lhs_integral == doctest::Approx(riesz_sum * vol).epsilon(1e-10));
  CHECK(std::isfinite(rep.implied_lower_c));
  CHECK(std::isfinite(rep.implied_upper_c));
  CHECK(rep.implied_lower_c > 0.0);
}

TEST_CASE("sandwich degenerate and invalid inputs") {
  const Grid g = Grid::cube(2, -1.0, 1.0, 5);
  const auto rep = sandwich(Measure::zero(2), params(2, 0.4, 2.0, 1.0), 1.0, SandwichVariant::wolff_riesz, g);
  CHECK(rep.degenerate);
  CHECK(std::isnan(rep.ratio));
  // An atom on a node makes both sides infinite.
  const auto on_node = sandwich(Measure::dirac(p2(0, 0), 1.0), params(2, 0.4, 2.0, 1.0), 1.0,
                                SandwichVariant::wolff_riesz, g);
  CHECK(on_node.degenerate);
  CHECK_THROWS_AS(sandwich(Measure::zero(2), params(2, 0.4, 3.0, 1.0), 1.5, SandwichVariant::wolff_riesz, g),
                  InvalidArgument);
}

TEST_CASE("sandwich constants stay bounded across masses") {
  const Grid g = Grid::cube(2, -1.0, 1.0, 10);
  const Measure base = Measure::atomic({p2(0.05, 0.07), p2(-0.3, 0.41)}, {1.0, 0.5});
  const auto pp = params(2, 0.3, 2.5, 0.8);
  std::vector<double> uppers;
  for (double scale : {0.1, 1.0, 10.0}) {
    const auto rep = sandwich(base.scaled(scale), pp, 2.0, SandwichVariant::wolff_riesz, g);
    REQUIRE_FALSE(rep.degenerate);
    uppers.push_back(rep.implied_upper_c);
  }
  const auto [lo, hi] = std::minmax_element(uppers.begin(), uppers.end());
  CHECK(*hi / *lo < 10.0);
}

TEST_CASE("bessel sandwich variants are finite") {
  const Grid g = Grid::cube(2, -1.0, 1.0, 6);
  const Measure m = Measure::ball_uniform(p2(0.02, 0.01), 0.3, 1.0);
  const auto pp = params(2, 0.5, 2.0, 1.0);
  for (auto v : {SandwichVariant::wolff_bessel, SandwichVariant::riesz_bessel}) {
    const auto rep = sandwich(m, pp, 1.0, v, g);
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.implied_upper_c > 0.0);
  }
  CHECK(to_string(SandwichVariant::riesz_bessel) == "riesz_bessel");

  // riesz_bessel has its own range q >= 1, independent of p
  const auto p3 = params(2, 0.3, 3.0, 1.0);
  CHECK_NOTHROW(sandwich(m, p3, 1.0, SandwichVariant::riesz_bessel, g));
  CHECK_THROWS_AS(sandwich(m, p3, 1.0, SandwichVariant::wolff_bessel, g), InvalidArgument);
  CHECK_THROWS_AS(sandwich(m, pp, 0.9, SandwichVariant::riesz_bessel, g), InvalidArgument);
}

TEST_CASE("exponential integrability") {
  const Grid g = Grid::cube(2, -1.0, 1.0, 17);
  auto pp = params(2, 0.5, 2.0, 0.5);
  const Measure m = Measure::ball_uniform(p2(0.1, 0.0), 0.3, 2.0);
  const auto base = exp_integrability(m, pp, p2(0, 0), 0.5, std::nullopt, g);
  CHECK(base.delta == doctest::Approx(default_exp_delta(pp)));
  CHECK(base.average >= 1.0);
  CHECK(std::isfinite(base.average));
  CHECK(base.nodes > 0);
  // The normalized exponent is invariant under scaling of the measure.
  const auto scaled = exp_integrability(m.scaled(40.0), pp, p2(0, 0), 0.5, std::nullopt, g);
  CHECK(scaled.average == doctest::Approx(base.average).epsilon(1e-9));
  CHECK(scaled.maximal_norm == doctest::Approx(40.0 * base.maximal_norm).epsilon(1e-9));
  // Nothing to integrate: the exponential is identically one.
  CHECK(exp_integrability(Measure::zero(2), pp, p2(0, 0), 0.5, std::nullopt, g).average == 1.0);
  // A larger delta can only raise the average.
  CHECK(exp_integrability(m, pp, p2(0, 0), 0.5, 2.0 * base.delta, g).average > base.average);
  // Closed form of the default delta at eta = 0: (1/24) alpha p ln 2.
  CHECK(default_exp_delta(pp) == doctest::Approx(0.5 / 12.0 * 0.5 * 2.0 * std::log(2.0)));
  pp.eta = 1.0;
  CHECK_THROWS_AS(default_exp_delta(pp), InvalidArgument);
}

TEST_CASE("composition bounds") {
  const Grid g = Grid::cube(2, -1.0, 1.0, 9);
  const ExpNonlinearity nl{2, 1.0, 1.0};
  const auto pp = params(2, 0.5, 2.0, 0.5);
  const auto zero = composition_bound(Measure::zero(2), pp, nl, CompositionVariant::exp_sup, g);
  CHECK(zero.normalized);
  CHECK_FALSE(zero.overflow);
  CHECK(std::isfinite(zero.lhs_sup));
  CHECK(zero.lhs_sup > 0.0);
  CHECK(std::isfinite(zero.ratio_sup));

  const Measure m = Measure::box_uniform(p2(-0.4, -0.4), p2(0.4, 0.4), 0.2);
  const auto full = composition_bound(m, pp, nl, CompositionVariant::exp_ratio, g);
  CompositionOptions small;
  small.delta = full.delta / 10.0;
  const auto tenth = composition_bound(m, pp, nl, CompositionVariant::exp_ratio, g, small);
  CHECK(tenth.lhs_sup < full.lhs_sup);
  CHECK(tenth.ratio_sup < full.ratio_sup);
  CHECK((full.rhs == tenth.rhs).all());

  auto whole = pp;
  whole.T = kInf;
  const auto trunc = composition_bound(m, whole, nl, CompositionVariant::truncated_exp_ratio,
                                       Grid::cube(2, -0.5, 0.5, 5));
  CHECK(std::isfinite(trunc.ratio_sup));
  CHECK(trunc.ratio_sup > 0.0);
  CHECK_THROWS_AS(composition_bound(m, pp, nl, CompositionVariant::truncated_exp_ratio, g), InvalidArgument);
}
