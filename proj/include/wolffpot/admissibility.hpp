#pragma once

#include "wolffpot/nonlinearity.hpp"

#include <string>
#include <vector>

namespace wolffpot {

/// One violated hypothesis. `code` is stable; `message` quotes the predicate.
struct Diagnostic {
  std::string code;
  std::string message;
};

/// "violated hypothesis 'such that <predicate>' (<detail>)"
Diagnostic violation(std::string code, const std::string& predicate, const std::string& detail);

/// Which solvability hypotheses a reaction term satisfies.
struct AdmissibilityFlags {
  bool reaction_valid = false;             // l >= 1, a > 0, beta >= 1
  bool finite_range = false;               // l*beta > p-1
  bool whole_space_wolff = false;          // l*beta > N(p-1)/(N - alpha p)
  bool whole_space_p_laplace = false;      // l*beta > N(p-1)/(N - p)
  bool k_hessian_bounded = false;          // l*beta > k
  bool whole_space_k_hessian = false;      // l*beta > Nk/(N - 2k)
};

AdmissibilityFlags admissibility(const ExpNonlinearity& nl, int N, double p, double alpha, int k = 1);

/// Reaction term itself: a > 0, l in N*, beta >= 1.
std::vector<Diagnostic> check_reaction(const ExpNonlinearity& nl);

/// Integral equation u = W^R[P(u) + mu] + f. R = +inf selects the whole-space hypothesis.
std::vector<Diagnostic> check_integral_equation(const ExpNonlinearity& nl, int N, double alpha, double p, double R);

/// -Delta_p u = P(u) + mu. whole_space selects the R^N hypothesis.
std::vector<Diagnostic> check_p_laplace(const ExpNonlinearity& nl, int N, double p, bool whole_space);

/// F_k[-u] = P(u) + mu. whole_space selects the R^N hypothesis.
std::vector<Diagnostic> check_k_hessian(const ExpNonlinearity& nl, int N, int k, bool whole_space);

/// Surrogate bounds only: 2k < N for k-Hessian, 1 < p < N for p-Laplace.
std::vector<Diagnostic> check_k_hessian_dimension(int N, int k);
std::vector<Diagnostic> check_p_laplace_dimension(int N, double p);

/// Potential parameters: Wolff (s > 1, 0 < alpha s < N), Riesz (0 < alpha < N),
/// fractional maximal (0 < alpha <= N, eta >= 0).
std::vector<Diagnostic> check_wolff_params(int N, double alpha, double s);
std::vector<Diagnostic> check_riesz_params(int N, double alpha);
std::vector<Diagnostic> check_maximal_params(int N, double alpha, double eta);

/// Orlicz pair Q_p for the reaction shape (l, beta).
std::vector<Diagnostic> check_orlicz_pair(double p, int l, double beta);

}  // namespace wolffpot
