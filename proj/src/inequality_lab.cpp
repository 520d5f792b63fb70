#include "wolffpot/inequality_lab.hpp"

#include "wolffpot/parallel.hpp"

#include <algorithm>

namespace wolffpot {

std::string to_string(SandwichVariant v) {
  switch (v) {
    case SandwichVariant::wolff_riesz: return "wolff_riesz";
    case SandwichVariant::wolff_bessel: return "wolff_bessel";
    case SandwichVariant::riesz_bessel: return "riesz_bessel";
  }
  return "unknown";
}

std::string to_string(CompositionVariant v) {
  switch (v) {
    case CompositionVariant::exp_sup: return "exp_sup";
    case CompositionVariant::exp_ratio: return "exp_ratio";
    case CompositionVariant::truncated_exp_ratio: return "truncated_exp_ratio";
  }
  return "unknown";
}

namespace {

double power_integral(const Field& values, double power, double vol) {
  double total = 0.0;
  for (Index i = 0; i < values.size(); ++i) total += std::pow(values[i], power);
  return total * vol;
}

PotentialParams order_params(const PotentialParams& pp) {
  PotentialParams op = pp;
  op.alpha = pp.alpha * pp.s;
  return op;
}

}  // namespace

SandwichReport sandwich(const Measure& m, const PotentialParams& pp, double q, SandwichVariant variant,
                        const Grid& grid) {
  require(pp.s > 1.0, "sandwich: p must exceed 1");
  if (variant == SandwichVariant::riesz_bessel)
    require(q >= 1.0, "sandwich: riesz_bessel requires q >= 1");
  else
    require(q >= pp.s - 1.0, "sandwich: requires q >= p - 1");
  require(grid.dim() == m.dim(), "sandwich: dimension mismatch");
  const double p = pp.s;
  const double vol = grid.cell_volume();
  const PotentialParams op = order_params(pp);
  SandwichReport rep;
  rep.q = q;
  double lower_exponent = 1.0 / q;
  if (variant == SandwichVariant::riesz_bessel) {
    rep.lhs_integral = power_integral(grid_eval(PotentialKind::bessel, m, op, grid), q, vol);
    rep.mid_integral = power_integral(grid_eval(PotentialKind::riesz, m, op, grid), q, vol);
  } else {
    const auto kind = variant == SandwichVariant::wolff_riesz ? PotentialKind::riesz : PotentialKind::bessel;
    rep.lhs_integral = power_integral(grid_eval(kind, m, op, grid), q / (p - 1.0), vol);
    rep.mid_integral = power_integral(grid_eval(PotentialKind::wolff, m, pp, grid), q, vol);
    lower_exponent = (p - 1.0) / q;
  }
  const double L = rep.lhs_integral, Mid = rep.mid_integral;
  rep.degenerate = !(L > 0.0 && Mid > 0.0 && std::isfinite(L) && std::isfinite(Mid));
  if (rep.degenerate) {
    rep.implied_lower_c = rep.implied_upper_c = rep.ratio = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.ratio = Mid / L;
  if (variant == SandwichVariant::riesz_bessel) {
    rep.implied_lower_c = std::pow(L / Mid, 1.0 / q);
    rep.implied_upper_c = std::pow(Mid / L, 1.0 / q);
  } else {
    rep.implied_lower_c = std::pow(L / Mid, lower_exponent);
    rep.implied_upper_c = std::pow(Mid / L, 1.0 / q);
  }
  return rep;
}

double default_exp_delta(const PotentialParams& pp) {
  const double p = pp.s;
  const double eta = pp.eta;
  require(p > 1.0 && eta >= 0.0 && eta < p - 1.0, "exp delta: requires 0 <= eta < p-1");
  const double ratio = (p - 1.0 - eta) / (12.0 * (p - 1.0));
  return 0.5 * std::pow(ratio, (p - 1.0) / (p - 1.0 - eta)) * pp.alpha * p * EIGEN_LN2;
}

ExpIntegrabilityReport exp_integrability(const Measure& m, const PotentialParams& pp, const Point& center,
                                         double r, std::optional<double> delta, const Grid& grid) {
  require(r > 0.0, "exp_integrability: radius must be positive");
  require(grid.dim() == m.dim() && center.size() == m.dim(), "exp_integrability: dimension mismatch");
  const double p = pp.s;
  ExpIntegrabilityReport rep;
  rep.delta = delta ? *delta : default_exp_delta(pp);
  require(rep.delta > 0.0, "exp_integrability: delta must be positive");
  const Measure local = restrict(m, center, r);

  std::vector<Index> inner, outer;
  for (Index i = 0; i < grid.size(); ++i) {
    const double d = (grid.node(i) - center).norm();
    if (d < 2.0 * r) outer.push_back(i);
    if (d < r) inner.push_back(i);
  }
  require(!outer.empty(), "exp_integrability: no grid nodes inside B_2r");
  rep.nodes = static_cast<int>(outer.size());

  PotentialParams mp = order_params(pp);
  if (local.has_atoms()) {
    rep.maximal_norm = kInf;
  } else {
    Field values = Field::Zero(static_cast<Index>(inner.size()));
    parallel_for(values.size(), [&](Index k) { values[k] = frac_maximal(local, mp, grid.node(inner[k])); });
    rep.maximal_norm = values.size() ? values.maxCoeff() : 0.0;
  }

  Field w(static_cast<Index>(outer.size()));
  parallel_for(w.size(), [&](Index k) { w[k] = wolff(local, pp, grid.node(outer[k])); });
  const double theta = (p - 1.0) / (p - 1.0 - pp.eta);
  const double scale = std::pow(rep.maximal_norm, -1.0 / (p - 1.0 - pp.eta));
  double total = 0.0;
  for (Index k = 0; k < w.size(); ++k) {
    if (w[k] == 0.0) {
      total += 1.0;
    } else if (std::isinf(w[k]) || std::isinf(scale)) {
      total = kInf;
    } else {
      total += std::exp(rep.delta * std::pow(w[k], theta) * scale);
    }
  }
  rep.average = total / static_cast<double>(w.size());
  return rep;
}

CompositionReport composition_bound(const Measure& m, const PotentialParams& pp, const ExpNonlinearity& nl,
                                    CompositionVariant variant, const Grid& grid, const CompositionOptions& options) {
  const int N = grid.dim();
  require(m.dim() == N && pp.dim == N, "composition_bound: dimension mismatch");
  const double p = pp.s;
  const double beta = nl.beta;
  const bool untruncated = variant == CompositionVariant::truncated_exp_ratio;
  require(untruncated == std::isinf(pp.T),
          "composition_bound: the truncated-exponential variant uses T = inf, the exponential ones a finite T");
  CompositionReport rep;
  PotentialParams mp = order_params(pp);
  mp.eta = (p - 1.0) * (beta - 1.0) / beta;
  rep.normalization = frac_maximal_sup_norm(m, mp, grid).value;
  rep.normalized = rep.normalization <= 1.0;

  PotentialParams dp = pp;
  dp.eta = mp.eta;
  rep.delta = options.delta ? *options.delta
                            : default_exp_delta(dp) * std::pow(2.0, -beta / (p - 1.0)) * std::pow(3.0, -beta);

  Measure omega(N);
  if (untruncated) {
    require(options.support_radius > 0.0, "composition_bound: support_radius must be positive");
    const double level = 1.0 / unit_density_maximal_norm(N, mp.alpha, options.support_radius, mp.eta);
    omega = Measure::ball_uniform(Point::Zero(N), options.support_radius, level);
  } else {
    const double level = 1.0 / unit_density_maximal_norm(N, mp.alpha, pp.T, mp.eta);
    const double pad = pp.T + grid.spacing;
    omega = Measure::box_uniform(grid.lower().array() - pad, grid.upper().array() + pad, level);
  }
  omega += m;

  rep.rhs = grid_eval(PotentialKind::wolff, omega, pp, grid);
  const Field nodal = rep.rhs.unaryExpr([&](double w) {
    const double z = rep.delta * std::pow(w, beta);
    return untruncated ? H<double>(nl.l, z) : std::exp(z);
  });
  const Field mass = node_to_cell_average(grid, nodal) * grid.cell_volume();
  rep.lhs = CellPotentialOperator::wolff(grid, pp).apply(mass);
  rep.overflow = !rep.lhs.allFinite() || !nodal.allFinite();
  rep.lhs_sup = rep.lhs.maxCoeff();
  double worst = 0.0;
  for (Index i = 0; i < rep.lhs.size(); ++i)
    if (rep.rhs[i] > 0.0) worst = std::max(worst, rep.lhs[i] / rep.rhs[i]);
  rep.ratio_sup = worst;
  return rep;
}

}  // namespace wolffpot
