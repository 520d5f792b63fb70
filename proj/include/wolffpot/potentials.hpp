#pragma once

#include "wolffpot/core.hpp"
#include "wolffpot/grid.hpp"
#include "wolffpot/measure.hpp"

#include <vector>

namespace wolffpot {

/// Parameters shared by the potential operators.
/// For wolff, alpha and s are the Wolff indices (alpha * s < N).
/// For riesz and frac_maximal, alpha is the kernel order itself.
struct PotentialParams {
  int dim = 2;
  double alpha = 1.0;
  double s = 2.0;
  double T = kInf;
  double eta = 0.0;
};

/// Logarithmic weight: (-ln t)^(-eta) for t <= 1/2, (ln 2)^(-eta) above.
template <typename Scalar>
Scalar h_eta(Scalar t, Scalar eta) {
  using std::log;
  using std::pow;
  if (eta == Scalar(0)) return Scalar(1);
  if (t <= Scalar(0.5)) return pow(-log(t), -eta);
  return pow(Scalar(EIGEN_LN2), -eta);
}

/// Closed-form Riesz kernel (N - alpha)^{-1} |z|^{-(N - alpha)} of the untruncated potential.
template <typename Scalar>
Scalar riesz_kernel(int N, Scalar alpha, Scalar r) {
  using std::pow;
  if (r <= Scalar(0)) return std::numeric_limits<Scalar>::infinity();
  return pow(r, -(Scalar(N) - alpha)) / (Scalar(N) - alpha);
}

/// W^T_{alpha,s}[m](x) = int_0^T (m(B_t(x)) / t^{N - alpha s})^{1/(s-1)} dt / t.
double wolff(const Measure& m, const PotentialParams& pp, const Point& x, double rel_tol = 1e-8);

/// I^T_alpha[m](x) = int_0^T m(B_t(x)) / t^{N - alpha} dt / t.
double riesz(const Measure& m, const PotentialParams& pp, const Point& x, double rel_tol = 1e-8);

/// sup_{0 < t <= T} m(B_t(x)) / (t^{N - alpha} h_eta(t)).
double frac_maximal(const Measure& m, const PotentialParams& pp, const Point& x);

struct SupNormEstimate {
  double value = 0.0;
  double probe_spacing = 0.0;
  bool lower_estimate = true;  // probing can only miss larger values
};

/// Max of frac_maximal over the probe nodes; +inf if m carries a positive atom.
SupNormEstimate frac_maximal_sup_norm(const Measure& m, const PotentialParams& pp, const Grid& probes);

/// |B_1| sup_{0 < t <= R} t^alpha / h_eta(t): the sup norm of the maximal
/// potential of Lebesgue measure (or of the indicator of B_R for the untruncated one).
double unit_density_maximal_norm(int N, double alpha, double R, double eta);

/// Bessel kernel G_alpha(r) by its heat-kernel subordination integral.
double bessel_kernel(int N, double alpha, double r);

/// G_alpha tabulated in log r with cubic Hermite interpolation (about 1e-9
/// relative). Radii outside the table fall back to bessel_kernel.
class BesselKernelTable {
 public:
  BesselKernelTable(int N, double alpha, double r_min = 1e-6, double r_max = 60.0);
  double operator()(double r) const;

 private:
  int N_;
  double alpha_;
  double u0_, du_;
  std::vector<double> logg_, slope_;
};

/// G_alpha * m at x. Ball and box parts are rasterized with `cells_per_unit` resolution.
double bessel_potential(const Measure& m, double alpha, const Point& x, int cells_per_unit = 64);

enum class PotentialKind { wolff, riesz, frac_maximal, bessel };

/// Pointwise evaluation on every node of the grid (threaded).
Field grid_eval(PotentialKind kind, const Measure& m, const PotentialParams& pp, const Grid& grid);

/// Integral int_0^T (S(t))^e t^{-gamma} dt/t for S(t) = m(B_t(x)).
/// Wolff uses e = 1/(s-1), gamma = (N - alpha s)/(s-1); Riesz uses e = 1, gamma = N - alpha.
double radial_power_integral(const Measure& m, const Point& x, double T, double e, double gamma,
                             double rel_tol = 1e-8);

/// Wolff or Riesz potential of a cell measure on a fixed grid, evaluated at the
/// grid nodes. Distances from nodes to cell centers form one sorted offset table
/// reused for every node, so repeated applications are cheap.
class CellPotentialOperator {
 public:
  CellPotentialOperator(const Grid& grid, double e, double gamma, double T);
  static CellPotentialOperator wolff(const Grid& grid, const PotentialParams& pp);
  static CellPotentialOperator riesz(const Grid& grid, const PotentialParams& pp);

  /// cell_mass holds the mass of each cell (not the density).
  Field apply(const Field& cell_mass, const AtomicPart* atoms = nullptr) const;

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  double e_;
  double gamma_;
  double T_;
  std::vector<int> shifts_;      // dim ints per offset
  std::vector<double> dist_;     // sorted distances
  std::vector<double> dist_pow_; // dist^{-gamma}
};

}  // namespace wolffpot
