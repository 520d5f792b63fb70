#include "wolffpot/admissibility.hpp"

#include <sstream>

namespace wolffpot {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Diagnostic violated(std::string code, const std::string& predicate, const std::string& detail) {
  return violation(std::move(code), predicate, detail);
}

void lbeta_above(std::vector<Diagnostic>& out, const ExpNonlinearity& nl, double bound, const char* code,
                 const char* predicate) {
  const double lb = nl.l * nl.beta;
  if (!(lb > bound)) out.push_back(violated(code, predicate, "l*beta = " + fmt(lb) + ", bound = " + fmt(bound)));
}

}  // namespace

Diagnostic violation(std::string code, const std::string& predicate, const std::string& detail) {
  return {std::move(code), "violated hypothesis 'such that " + predicate + "' (" + detail + ")"};
}

AdmissibilityFlags admissibility(const ExpNonlinearity& nl, int N, double p, double alpha, int k) {
  AdmissibilityFlags f;
  const double lb = nl.l * nl.beta;
  f.reaction_valid = nl.l >= 1 && nl.a > 0.0 && nl.beta >= 1.0;
  f.finite_range = lb > p - 1.0;
  f.whole_space_wolff = alpha * p < N && lb > N * (p - 1.0) / (N - alpha * p);
  f.whole_space_p_laplace = p < N && lb > N * (p - 1.0) / (N - p);
  f.k_hessian_bounded = lb > k;
  f.whole_space_k_hessian = 2 * k < N && lb > static_cast<double>(N) * k / (N - 2 * k);
  return f;
}

std::vector<Diagnostic> check_reaction(const ExpNonlinearity& nl) {
  std::vector<Diagnostic> out;
  const std::string pred = "a>0, l in N* and beta>=1";
  if (nl.l < 1) out.push_back(violated("reaction_l", pred, "l = " + std::to_string(nl.l)));
  if (!(nl.a > 0.0)) out.push_back(violated("reaction_a", pred, "a = " + fmt(nl.a)));
  if (!(nl.beta >= 1.0)) out.push_back(violated("reaction_beta", pred, "beta = " + fmt(nl.beta)));
  return out;
}

std::vector<Diagnostic> check_integral_equation(const ExpNonlinearity& nl, int N, double alpha, double p, double R) {
  std::vector<Diagnostic> out = check_reaction(nl);
  if (!(p > 1.0)) out.push_back(violated("p_gt_1", "p > 1", "p = " + fmt(p)));
  if (!(alpha > 0.0 && alpha * p < N))
    out.push_back(violated("alpha_p_range", "0 < alpha*p < N", "alpha*p = " + fmt(alpha * p) + ", N = " + std::to_string(N)));
  if (!out.empty()) return out;
  if (std::isinf(R))
    lbeta_above(out, nl, N * (p - 1.0) / (N - alpha * p), "lbeta_gt_whole_space_wolff", "l*beta > N(p-1)/(N-alpha*p)");
  else
    lbeta_above(out, nl, p - 1.0, "lbeta_gt_p_minus_1", "l*beta > p-1");
  return out;
}

std::vector<Diagnostic> check_p_laplace_dimension(int N, double p) {
  std::vector<Diagnostic> out;
  if (!(p > 1.0 && p < N)) out.push_back(violated("p_range", "1 < p < N", "p = " + fmt(p) + ", N = " + std::to_string(N)));
  return out;
}

std::vector<Diagnostic> check_k_hessian_dimension(int N, int k) {
  std::vector<Diagnostic> out;
  if (k < 1) out.push_back(violated("k_range", "k in {1,...,N}", "k = " + std::to_string(k)));
  if (!(2 * k < N)) out.push_back(violated("two_k_lt_N", "2k<N", "k = " + std::to_string(k) + ", N = " + std::to_string(N)));
  return out;
}

std::vector<Diagnostic> check_p_laplace(const ExpNonlinearity& nl, int N, double p, bool whole_space) {
  std::vector<Diagnostic> out = check_reaction(nl);
  for (auto& d : check_p_laplace_dimension(N, p)) out.push_back(d);
  if (!out.empty()) return out;
  if (whole_space)
    lbeta_above(out, nl, N * (p - 1.0) / (N - p), "lbeta_gt_whole_space_p_laplace", "l*beta > N(p-1)/(N-p)");
  else
    lbeta_above(out, nl, p - 1.0, "lbeta_gt_p_minus_1", "l*beta > p-1");
  return out;
}

std::vector<Diagnostic> check_k_hessian(const ExpNonlinearity& nl, int N, int k, bool whole_space) {
  std::vector<Diagnostic> out = check_reaction(nl);
  for (auto& d : check_k_hessian_dimension(N, k)) out.push_back(d);
  if (!out.empty()) return out;
  if (whole_space)
    lbeta_above(out, nl, static_cast<double>(N) * k / (N - 2 * k), "lbeta_gt_whole_space_k_hessian", "l*beta > Nk/(N-2k)");
  else
    lbeta_above(out, nl, k, "lbeta_gt_k", "l*beta > k");
  return out;
}

std::vector<Diagnostic> check_wolff_params(int N, double alpha, double s) {
  std::vector<Diagnostic> out;
  if (!(s > 1.0)) out.push_back(violated("p_gt_1", "p > 1", "p = " + fmt(s)));
  if (!(alpha > 0.0 && alpha * s < N))
    out.push_back(violated("alpha_p_range", "0 < alpha*p < N", "alpha*p = " + fmt(alpha * s) + ", N = " + std::to_string(N)));
  return out;
}

std::vector<Diagnostic> check_riesz_params(int N, double alpha) {
  std::vector<Diagnostic> out;
  if (!(alpha > 0.0 && alpha < N))
    out.push_back(violated("alpha_range", "0 < alpha < N", "alpha = " + fmt(alpha) + ", N = " + std::to_string(N)));
  return out;
}

std::vector<Diagnostic> check_maximal_params(int N, double alpha, double eta) {
  std::vector<Diagnostic> out;
  if (!(alpha > 0.0 && alpha <= N))
    out.push_back(violated("alpha_range", "0 < alpha <= N", "alpha = " + fmt(alpha) + ", N = " + std::to_string(N)));
  if (!(eta >= 0.0)) out.push_back(violated("eta_range", "eta >= 0", "eta = " + fmt(eta)));
  return out;
}

std::vector<Diagnostic> check_orlicz_pair(double p, int l, double beta) {
  std::vector<Diagnostic> out;
  if (!(p > 1.0)) out.push_back(violated("p_gt_1", "p > 1", "p = " + fmt(p)));
  if (l < 1) out.push_back(violated("reaction_l", "l in N*", "l = " + std::to_string(l)));
  if (!(beta >= 1.0)) out.push_back(violated("reaction_beta", "beta>=1", "beta = " + fmt(beta)));
  if (p > 1.0 && !(l * beta >= p - 1.0))
    out.push_back(violated("orlicz_convex", "l*beta >= p-1", "l*beta = " + fmt(l * beta) + ", p-1 = " + fmt(p - 1.0)));
  return out;
}

}  // namespace wolffpot
