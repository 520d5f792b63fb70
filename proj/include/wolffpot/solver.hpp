#pragma once

#include "wolffpot/admissibility.hpp"
#include "wolffpot/grid.hpp"
#include "wolffpot/measure.hpp"
#include "wolffpot/nonlinearity.hpp"
#include "wolffpot/potentials.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wolffpot {

enum class InitialGuess { forcing, potential };

/// u = K W^R_{alpha,p}[P(u) + mu] + f on the nodes of `grid`.
/// pp.s is p and pp.T is R (R = +inf for the whole-space equation).
struct ProblemSpec {
  PotentialParams pp;
  ExpNonlinearity nl;
  Measure mu{2};
  Field f;  // nodal values; empty means f = 0
  Grid grid;
  double epsilon = 1.0;
  double K = 1.0;
  std::optional<double> M_override;
  double delta0 = 1.0;   // exponential-integrability constant entering M
  double c_const = 1.0;  // composition constant entering M
  double support_radius = 0.0;  // radius of B_R carrying mu and f when pp.T = inf
  int max_iters = 200;
  double tol = 1e-8;
  bool force = false;  // iterate even when the smallness test fails
  InitialGuess initial = InitialGuess::forcing;
};

struct SolverConstants {
  double c_p = 1.0;
  double c_a_eps = 0.0;
  double a_bar = 0.0;
};

/// c_p = max(1, 4^{(2-p)/(p-1)}), c_{a,eps} = 2/(1 - (a/(a+eps))^{1/beta}),
/// a_bar = a (4 c_{a,eps} c_p K)^beta.
SolverConstants solver_constants(const ExpNonlinearity& nl, double p, double K, double epsilon);

/// Threshold M = 1 ∧ (delta0/a_bar)^{...} ∧ c^{...} for the smallness test.
double structural_threshold(const ProblemSpec& spec, const SolverConstants& c);

/// P_{l, a+eps, beta}(f) as a cell density on the solve grid.
Measure forcing_reaction(const ProblemSpec& spec);

struct SmallnessReport {
  bool passed = false;
  double sup_mu = 0.0;
  double sup_mu1 = 0.0;
  double M_used = 0.0;
  double eta = 0.0;
  double probe_spacing = 0.0;
  bool structural = true;  // false when M came from M_override
};

SmallnessReport smallness_check(const ProblemSpec& spec);

/// omega_mu = level * background + mu, omega_f = level * background + mu1.
/// The background is Lebesgue measure near the grid (finite R) or the
/// indicator of B_R (R = inf); level normalizes its maximal potential to M.
struct LiftedMeasures {
  Measure omega_mu{2};
  Measure omega_f{2};
  double level = 0.0;
  bool whole_space = false;
};

LiftedMeasures lift_measures(const ProblemSpec& spec, double M);

/// 2 c_p K W[omega_mu] + 2 c_p K W[omega_f] + f at the grid nodes
/// (the omega_f term is dropped when f = 0).
Field apriori_bound(const ProblemSpec& spec, const LiftedMeasures& lifted, const SolverConstants& c);

enum class SolveStatus { converged, max_iters, diverged_bound, diverged_overflow, smallness_failed };
std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::max_iters;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  std::vector<double> iterates_sup_norm;  // sup |u_m| per iterate, starting at u_0
  std::vector<double> increments;         // sup |u_{m+1} - u_m|
  double residual = 0.0;                  // last increment
  double fixed_point_residual = 0.0;      // sup |u - T(u)| at the returned iterate
  double apriori_margin = 0.0;            // min over nodes and iterates of bound - u_m
  double max_bound_excess = 0.0;          // max over nodes and iterates of u_m - bound (<= 0 when respected)
  bool monotone = true;
  double boundary_mass_fraction = 0.0;    // share of P(u) mass in boundary cells
  double mu_mass_outside_grid = 0.0;
  SmallnessReport smallness;
  SolverConstants constants;
  Field solution;
  Field bound;
};

/// Picard iteration u_{m+1} = K W[P(u_m) + mu] + f starting from f
/// (or K W[mu] + f), with every iterate checked against the a-priori bound.
SolveReport picard_solve(const ProblemSpec& spec);

/// Admissibility diagnostics for a problem (empty when admissible).
std::vector<Diagnostic> validate_problem(const ProblemSpec& spec);

enum class SurrogateKind { p_laplace, k_hessian };

struct SurrogateOptions {
  double p = 2.0;           // p-Laplace exponent
  int k = 1;                // k-Hessian order
  double b = 0.0;           // boundary data bound (k-Hessian)
  double background_M = 0;  // optional background level entering omega (p-Laplace)
  double beta = 1.0;        // sets eta = (p-1)(beta-1)/beta for the background normalization
  std::optional<std::pair<Point, Point>> domain_box;  // enables the interior lower envelope
};

struct SurrogateEnvelope {
  Field upper;
  Field lower;
  bool has_lower = false;
  double alpha = 0.0;
  double s = 0.0;
};

/// Wolff-potential envelopes for p-Laplace (alpha = 1, s = p) and k-Hessian
/// (alpha = 2k/(k+1), s = k+1) equations on a domain of diameter domain_diam.
SurrogateEnvelope pde_surrogate_bound(SurrogateKind kind, const Measure& mu, double domain_diam, double K,
                                      const SurrogateOptions& options, const Grid& grid);

}  // namespace wolffpot
