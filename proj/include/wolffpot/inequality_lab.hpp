#pragma once

#include "wolffpot/grid.hpp"
#include "wolffpot/measure.hpp"
#include "wolffpot/nonlinearity.hpp"
#include "wolffpot/potentials.hpp"

#include <optional>
#include <string>

namespace wolffpot {

/// Which integral comparison to measure.
///  wolff_riesz:  ∫ (I^T_{alpha p})^{q/(p-1)}  vs  ∫ (W^T_{alpha,p})^q
///  wolff_bessel: ∫ (G_{alpha p})^{q/(p-1)}    vs  ∫ (W^T_{alpha,p})^q
///  riesz_bessel: ∫ (G_{alpha p})^q           vs  ∫ (I^T_{alpha p})^q
enum class SandwichVariant { wolff_riesz, wolff_bessel, riesz_bessel };
std::string to_string(SandwichVariant v);

/// Implied constants are the smallest c with lhs^{e}/c <= mid and mid <= c lhs^{1/q}
/// in the normalized powers of each variant; both equal 1 when the integrals agree.
struct SandwichReport {
  double q = 1.0;
  double lhs_integral = 0.0;  // Riesz or Bessel side
  double mid_integral = 0.0;  // Wolff side (Riesz side for riesz_bessel)
  double implied_lower_c = 0.0;
  double implied_upper_c = 0.0;
  double ratio = 0.0;  // mid / lhs
  bool degenerate = false;  // zero or infinite integrals
};

/// Integrals are node sums times the cell volume over `grid`.
SandwichReport sandwich(const Measure& m, const PotentialParams& pp, double q, SandwichVariant variant,
                        const Grid& grid);

struct ExpIntegrabilityReport {
  double average = 0.0;      // mean of the exponential over nodes in B_{2r}(center)
  double maximal_norm = 0.0; // sup of M^eta_{alpha p, T}[mu restricted to B_r(center)] over B_r(center)
  double delta = 0.0;
  int nodes = 0;
};

/// Default exponent 1/2 ((p-1-eta)/(12(p-1)))^{(p-1)/(p-1-eta)} alpha p log 2.
double default_exp_delta(const PotentialParams& pp);

/// Mean over B_{2r}(center) of exp(delta W^{(p-1)/(p-1-eta)} / ||M^eta[mu_r]||^{1/(p-1-eta)}).
ExpIntegrabilityReport exp_integrability(const Measure& m, const PotentialParams& pp, const Point& center,
                                         double r, std::optional<double> delta, const Grid& grid);

/// Composition estimates: the Wolff potential of an exponential of a Wolff potential.
///  exp_sup / exp_ratio: finite T, density exp(delta W^T[omega]^beta)
///  truncated_exp_ratio: T = inf, density H_l(delta W[omega]^beta)
enum class CompositionVariant { exp_sup, exp_ratio, truncated_exp_ratio };
std::string to_string(CompositionVariant v);

struct CompositionOptions {
  std::optional<double> delta;
  double support_radius = 1.0;  // B_R carrying the background for the untruncated variant
};

struct CompositionReport {
  Field lhs;  // W[density] at nodes
  Field rhs;  // W[omega] at nodes
  double lhs_sup = 0.0;
  double ratio_sup = 0.0;
  double delta = 0.0;
  double normalization = 0.0;  // sup norm of M^eta[mu] on the grid
  bool normalized = false;     // normalization <= 1
  bool overflow = false;
};

CompositionReport composition_bound(const Measure& m, const PotentialParams& pp, const ExpNonlinearity& nl,
                                    CompositionVariant variant, const Grid& grid,
                                    const CompositionOptions& options = {});

}  // namespace wolffpot
