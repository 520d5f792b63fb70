#include <doctest.h>

#include "wolffpot/solver.hpp"

using namespace wolffpot;

namespace {

ProblemSpec box_problem(double density, int n) {
  ProblemSpec sp;
  sp.pp.dim = 2;
  sp.pp.alpha = 0.5;
  sp.pp.s = 2.0;
  sp.pp.T = 1.0;
  sp.nl = {2, 1.0, 1.0};
  sp.grid = Grid::cube(2, -1.0, 1.0, n);
  sp.mu = Measure::box_uniform(Eigen::Vector2d(-0.5, -0.5), Eigen::Vector2d(0.5, 0.5), density);
  sp.M_override = 0.5;
  return sp;
}

}  // namespace

TEST_CASE("solver constants") {
  const ExpNonlinearity nl{2, 1.0, 1.0};
  auto c = solver_constants(nl, 2.0, 1.0, 1.0);
  CHECK(c.c_p == 1.0);
  CHECK(c.c_a_eps == doctest::Approx(4.0));  // 2 / (1 - 1/2)
  CHECK(c.a_bar == doctest::Approx(16.0));
  CHECK(solver_constants(nl, 1.5, 1.0, 1.0).c_p == doctest::Approx(4.0));
  CHECK(solver_constants(nl, 3.0, 1.0, 1.0).c_p == 1.0);
  // Large epsilon drives c_{a,eps} down to 2.
  CHECK(solver_constants(nl, 2.0, 1.0, 1e12).c_a_eps == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_THROWS_AS(solver_constants(nl, 1.0, 1.0, 1.0), InvalidArgument);

  // beta = 2, p = 2, l = 2: exponents 1/2 (2 - 1/2) = 3/4 and (4 - 1)/2 = 3/2.
  ProblemSpec sp = box_problem(0.0, 5);
  sp.nl = {2, 1.0, 2.0};
  sp.delta0 = 0.5;
  sp.c_const = 2.0;
  const auto c2 = solver_constants(sp.nl, 2.0, 1.0, 1.0);
  const double expect = std::min({1.0, std::pow(0.5 / c2.a_bar, 1.0 / 0.75), std::pow(2.0, -1.0 / 1.5)});
  CHECK(structural_threshold(sp, c2) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("zero data converges at once") {
  ProblemSpec sp = box_problem(0.0, 9);
  sp.mu = Measure::zero(2);
  const auto r = picard_solve(sp);
  CHECK(r.status == SolveStatus::converged);
  CHECK(r.iterations == 1);
  CHECK(r.solution.abs().maxCoeff() == 0.0);
  CHECK(r.fixed_point_residual == 0.0);
}

TEST_CASE("atoms fail the smallness test") {
  ProblemSpec sp = box_problem(0.05, 9);
  sp.mu += Measure::dirac(Eigen::Vector2d(0.1, 0.2), 1e-6);
  const auto s = smallness_check(sp);
  CHECK(s.sup_mu == kInf);
  CHECK_FALSE(s.passed);
  const auto r = picard_solve(sp);
  CHECK(r.status == SolveStatus::smallness_failed);
  CHECK(r.solution.size() == 0);
}

TEST_CASE("structural threshold is used without override") {
  ProblemSpec sp = box_problem(0.05, 9);
  sp.M_override.reset();
  const auto s = smallness_check(sp);
  CHECK(s.structural);
  CHECK(s.M_used == doctest::Approx(structural_threshold(sp, solver_constants(sp.nl, 2.0, 1.0, 1.0))));
  CHECK_FALSE(s.passed);
  sp.mu = sp.mu.scaled(1e-6);
  CHECK(smallness_check(sp).passed);
}

TEST_CASE("lifted measures") {
  ProblemSpec sp = box_problem(0.05, 9);
  const auto lifted = lift_measures(sp, 0.5);
  // The background level normalizes the maximal norm of a unit density to M.
  const double norm = unit_density_maximal_norm(2, 1.0, 1.0, 0.0);
  CHECK(lifted.level * norm == doctest::Approx(0.5));
  CHECK_FALSE(lifted.whole_space);
  // Without forcing both lifts are the same background; they differ by mu.
  CHECK(lifted.omega_mu.total_mass() - lifted.omega_f.total_mass() == doctest::Approx(sp.mu.total_mass()));
  const auto c = solver_constants(sp.nl, 2.0, 1.0, 1.0);
  const Field bound = apriori_bound(sp, lifted, c);
  CHECK((bound > 0.0).all());

  sp.pp.T = kInf;
  CHECK_THROWS_AS(lift_measures(sp, 0.5), InvalidArgument);
  sp.support_radius = 2.0;
  const auto whole = lift_measures(sp, 0.5);
  CHECK(whole.whole_space);
  CHECK(whole.level * unit_density_maximal_norm(2, 1.0, 2.0, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("monotone iteration stays under the bound") {
  ProblemSpec sp = box_problem(0.05, 17);
  sp.tol = 1e-9;
  const auto r = picard_solve(sp);
  REQUIRE(r.status == SolveStatus::converged);
  CHECK(r.monotone);
  CHECK(r.max_bound_excess <= 0.0);
  CHECK(r.fixed_point_residual <= 2 * sp.tol);
  CHECK(r.iterates_sup_norm.size() == static_cast<std::size_t>(r.iterations) + 1);
  for (std::size_t i = 1; i < r.iterates_sup_norm.size(); ++i)
    CHECK(r.iterates_sup_norm[i] >= r.iterates_sup_norm[i - 1]);
  CHECK((r.solution >= 0.0).all());

  // Starting from K W[mu] + f reaches the same fixed point.
  sp.initial = InitialGuess::potential;
  const auto r2 = picard_solve(sp);
  REQUIRE(r2.converged);
  CHECK((r.solution - r2.solution).abs().maxCoeff() < 1e-8);
}

TEST_CASE("forcing shifts the solution up") {
  ProblemSpec sp = box_problem(0.05, 9);
  sp.f = Field::Constant(sp.grid.size(), 0.01);
  const auto r = picard_solve(sp);
  REQUIRE(r.converged);
  CHECK((r.solution >= sp.f).all());
  sp.f = Field::Constant(3, 0.01);
  CHECK_THROWS_AS(picard_solve(sp), InvalidArgument);
  sp.f = Field::Constant(sp.grid.size(), -0.01);
  CHECK_THROWS_AS(picard_solve(sp), InvalidArgument);
}

TEST_CASE("huge data trips the divergence flag") {
  ProblemSpec sp = box_problem(0.05e6, 9);
  sp.force = true;
  const auto r = picard_solve(sp);
  CHECK(r.diverged);
  CHECK((r.status == SolveStatus::diverged_bound || r.status == SolveStatus::diverged_overflow));
  CHECK_FALSE(r.converged);
}

TEST_CASE("inadmissible reaction is rejected") {
  ProblemSpec sp = box_problem(0.05, 9);
  sp.nl = {1, 1.0, 1.0};  // l beta = 1 = p - 1
  CHECK_FALSE(validate_problem(sp).empty());
  CHECK_THROWS_AS(picard_solve(sp), AdmissibilityError);
  try {
    picard_solve(sp);
  } catch (const AdmissibilityError& e) {
    CHECK(e.code() == "lbeta_gt_p_minus_1");
  }
  sp.nl = {2, 1.0, 1.0};
  sp.pp.T = kInf;
  CHECK_FALSE(validate_problem(sp).empty());
}

TEST_CASE("pde surrogates") {
  const Grid g = Grid::cube(3, -1.0, 1.0, 5);
  const Measure mu = Measure::ball_uniform(Point::Zero(3), 0.5, 1.0);
  SurrogateOptions opt;
  opt.p = 2.0;
  opt.k = 1;
  // k = 1 Hessian is the Laplacian, the same Wolff potential as p = 2.
  const auto lap = pde_surrogate_bound(SurrogateKind::p_laplace, mu, 2.0, 1.0, opt, g);
  const auto hes = pde_surrogate_bound(SurrogateKind::k_hessian, mu, 2.0, 1.0, opt, g);
  CHECK(lap.alpha == hes.alpha);
  CHECK((lap.upper - hes.upper).abs().maxCoeff() <= 1e-12 * lap.upper.abs().maxCoeff());

  opt.b = 0.25;
  const auto flat = pde_surrogate_bound(SurrogateKind::k_hessian, Measure::zero(3), 2.0, 1.0, opt, g);
  CHECK((flat.upper == 0.25).all());

  opt.domain_box = std::make_pair(Point(Point::Constant(3, -1.0)), Point(Point::Constant(3, 1.0)));
  const auto env = pde_surrogate_bound(SurrogateKind::p_laplace, mu, 2.0, 1.0, opt, g);
  REQUIRE(env.has_lower);
  CHECK((env.lower <= env.upper).all());
  CHECK(env.lower.maxCoeff() > 0.0);

  opt.k = 2;  // 2k = 4 > N = 3
  CHECK_THROWS_AS(pde_surrogate_bound(SurrogateKind::k_hessian, mu, 2.0, 1.0, opt, g), AdmissibilityError);
  opt.p = 3.0;  // p = N
  CHECK_THROWS_AS(pde_surrogate_bound(SurrogateKind::p_laplace, mu, 2.0, 1.0, opt, g), AdmissibilityError);
}
