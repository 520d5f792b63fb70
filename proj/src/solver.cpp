#include "wolffpot/solver.hpp"

#include "wolffpot/parallel.hpp"

#include <algorithm>

namespace wolffpot {

namespace {

double reaction_eta(double p, double beta) { return (p - 1.0) * (beta - 1.0) / beta; }

PotentialParams maximal_params(const ProblemSpec& spec) {
  PotentialParams mp = spec.pp;
  mp.alpha = spec.pp.alpha * spec.pp.s;
  mp.eta = reaction_eta(spec.pp.s, spec.nl.beta);
  return mp;
}

Field forcing_values(const ProblemSpec& spec) {
  if (spec.f.size() == 0) return Field::Zero(spec.grid.size());
  return spec.f;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::diverged_bound: return "diverged_bound";
    case SolveStatus::diverged_overflow: return "diverged_overflow";
    case SolveStatus::smallness_failed: return "smallness_failed";
  }
  return "unknown";
}

SolverConstants solver_constants(const ExpNonlinearity& nl, double p, double K, double epsilon) {
  require(p > 1.0, "solver constants: p must exceed 1");
  require(K > 0.0 && epsilon > 0.0, "solver constants: K and epsilon must be positive");
  SolverConstants c;
  c.c_p = std::max(1.0, std::pow(4.0, (2.0 - p) / (p - 1.0)));
  c.c_a_eps = 2.0 / (1.0 - std::pow(nl.a / (nl.a + epsilon), 1.0 / nl.beta));
  c.a_bar = nl.a * std::pow(4.0 * c.c_a_eps * c.c_p * K, nl.beta);
  return c;
}

double structural_threshold(const ProblemSpec& spec, const SolverConstants& c) {
  const double p = spec.pp.s;
  const double beta = spec.nl.beta;
  const double l = spec.nl.l;
  const double first = 0.5 * (beta / (p - 1.0) - 1.0 / l);
  const double second = (beta * l / (p - 1.0) - 1.0) / (2.0 * (p - 1.0));
  require(first > 0.0 && second > 0.0, "structural threshold: requires l*beta > p-1");
  const double m1 = std::pow(spec.delta0 / c.a_bar, 1.0 / first);
  const double m2 = std::pow(spec.c_const, -1.0 / second);
  return std::min({1.0, m1, m2});
}

Measure forcing_reaction(const ProblemSpec& spec) {
  const Field f = forcing_values(spec);
  if ((f == 0.0).all()) return Measure::zero(spec.grid.dim());
  const ExpNonlinearity lifted = spec.nl.with_a(spec.nl.a + spec.epsilon);
  const Field nodal = f.unaryExpr([&](double v) { return lifted(v); });
  return Measure::on_cells(spec.grid, node_to_cell_average(spec.grid, nodal));
}

SmallnessReport smallness_check(const ProblemSpec& spec) {
  SmallnessReport r;
  const PotentialParams mp = maximal_params(spec);
  r.eta = mp.eta;
  const auto mu_est = frac_maximal_sup_norm(spec.mu, mp, spec.grid);
  const auto mu1_est = frac_maximal_sup_norm(forcing_reaction(spec), mp, spec.grid);
  r.sup_mu = mu_est.value;
  r.sup_mu1 = mu1_est.value;
  r.probe_spacing = mu_est.probe_spacing;
  if (spec.M_override) {
    r.M_used = *spec.M_override;
    r.structural = false;
  } else {
    r.M_used = structural_threshold(spec, solver_constants(spec.nl, spec.pp.s, spec.K, spec.epsilon));
  }
  r.passed = r.sup_mu <= r.M_used && r.sup_mu1 <= r.M_used;
  return r;
}

LiftedMeasures lift_measures(const ProblemSpec& spec, double M) {
  require(M > 0.0, "lift_measures: M must be positive");
  const int N = spec.grid.dim();
  const PotentialParams mp = maximal_params(spec);
  LiftedMeasures out;
  out.whole_space = std::isinf(spec.pp.T);
  Measure background(N);
  if (out.whole_space) {
    require(spec.support_radius > 0.0, "lift_measures: support_radius is required when R = inf");
    out.level = M / unit_density_maximal_norm(N, mp.alpha, spec.support_radius, mp.eta);
    background = Measure::ball_uniform(Point::Zero(N), spec.support_radius, out.level);
  } else {
    out.level = M / unit_density_maximal_norm(N, mp.alpha, spec.pp.T, mp.eta);
    const double pad = spec.pp.T + spec.grid.spacing;
    background = Measure::box_uniform(spec.grid.lower().array() - pad, spec.grid.upper().array() + pad, out.level);
  }
  out.omega_mu = add(background, spec.mu);
  out.omega_f = add(background, forcing_reaction(spec));
  return out;
}

Field apriori_bound(const ProblemSpec& spec, const LiftedMeasures& lifted, const SolverConstants& c) {
  const Field f = forcing_values(spec);
  const double scale = 2.0 * c.c_p * spec.K;
  Field bound = scale * grid_eval(PotentialKind::wolff, lifted.omega_mu, spec.pp, spec.grid) + f;
  if (!(f == 0.0).all()) bound += scale * grid_eval(PotentialKind::wolff, lifted.omega_f, spec.pp, spec.grid);
  return bound;
}

std::vector<Diagnostic> validate_problem(const ProblemSpec& spec) {
  std::vector<Diagnostic> out =
      check_integral_equation(spec.nl, spec.grid.dim(), spec.pp.alpha, spec.pp.s, spec.pp.T);
  if (std::isinf(spec.pp.T) && !(spec.support_radius > 0.0))
    out.push_back({"support_radius", "the whole-space equation needs support_radius > 0"});
  return out;
}

SolveReport picard_solve(const ProblemSpec& spec) {
  require(spec.pp.dim == spec.grid.dim() && spec.mu.dim() == spec.grid.dim(), "picard_solve: dimension mismatch");
  require(spec.f.size() == 0 || spec.f.size() == spec.grid.size(), "picard_solve: f must have one value per node");
  require(spec.f.size() == 0 || (spec.f >= 0.0).all(), "picard_solve: f must be nonnegative");
  require(spec.tol > 0.0 && spec.max_iters >= 1, "picard_solve: tol > 0 and max_iters >= 1 required");
  const auto diags = validate_problem(spec);
  if (!diags.empty()) throw AdmissibilityError(diags.front().code, diags.front().message);

  SolveReport rep;
  rep.constants = solver_constants(spec.nl, spec.pp.s, spec.K, spec.epsilon);
  rep.smallness = smallness_check(spec);
  if (!rep.smallness.passed && !spec.force) {
    rep.status = SolveStatus::smallness_failed;
    return rep;
  }

  const LiftedMeasures lifted = lift_measures(spec, rep.smallness.M_used);
  rep.bound = apriori_bound(spec, lifted, rep.constants);

  const Grid& grid = spec.grid;
  const auto op = CellPotentialOperator::wolff(grid, spec.pp);
  const AtomicPart atoms = collect_atoms(spec.mu);
  const Field mu_cells = rasterize_to_cells(spec.mu, grid);
  double atom_mass = 0.0;
  for (double w : atoms.masses) atom_mass += w;
  rep.mu_mass_outside_grid = std::max(0.0, spec.mu.total_mass() - atom_mass - mu_cells.sum());
  const Field f = forcing_values(spec);
  const double vol = grid.cell_volume();

  auto reaction_cells = [&](const Field& u) {
    const Field nodal = u.unaryExpr([&](double v) { return spec.nl(v); });
    return Field(node_to_cell_average(grid, nodal) * vol);
  };
  auto picard_map = [&](const Field& u) {
    return Field(spec.K * op.apply(reaction_cells(u) + mu_cells, &atoms) + f);
  };

  rep.apriori_margin = kInf;
  rep.max_bound_excess = -kInf;
  // Returns false when u leaves the a-priori envelope.
  auto track = [&](const Field& u) {
    rep.iterates_sup_norm.push_back(u.abs().maxCoeff());
    const Field gap = rep.bound - u;
    rep.apriori_margin = std::min(rep.apriori_margin, gap.minCoeff());
    rep.max_bound_excess = std::max(rep.max_bound_excess, (-gap).maxCoeff());
    return (u <= rep.bound * (1.0 + 1e-10)).all();
  };

  Field u = spec.initial == InitialGuess::forcing ? f : Field(spec.K * op.apply(mu_cells, &atoms) + f);
  rep.status = SolveStatus::max_iters;
  if (!track(u)) {
    rep.status = SolveStatus::diverged_bound;
  } else {
    for (int it = 1; it <= spec.max_iters; ++it) {
      Field next = picard_map(u);
      rep.iterations = it;
      if (!next.allFinite()) {
        rep.status = SolveStatus::diverged_overflow;
        rep.iterates_sup_norm.push_back(kInf);
        break;
      }
      if (!(next >= u - 1e-12 * u.abs()).all()) rep.monotone = false;
      const double inc = (next - u).abs().maxCoeff();
      rep.increments.push_back(inc);
      rep.residual = inc;
      u = std::move(next);
      if (!track(u)) {
        rep.status = SolveStatus::diverged_bound;
        break;
      }
      if (inc < spec.tol) {
        rep.status = SolveStatus::converged;
        break;
      }
    }
  }
  rep.converged = rep.status == SolveStatus::converged;
  rep.diverged = rep.status == SolveStatus::diverged_bound || rep.status == SolveStatus::diverged_overflow;
  rep.solution = u;
  if (u.allFinite()) {
    const Field image = picard_map(u);
    rep.fixed_point_residual = image.allFinite() ? (image - u).abs().maxCoeff() : kInf;
    const Field cells = reaction_cells(u);
    const double total = cells.sum();
    if (total > 0.0 && std::isfinite(total)) {
      const auto extents = grid.cell_counts();
      double edge = 0.0;
      for (Index c = 0; c < cells.size(); ++c) {
        const auto multi = unravel_index(c, extents);
        for (std::size_t d = 0; d < multi.size(); ++d)
          if (multi[d] == 0 || multi[d] == extents[d] - 1) {
            edge += cells[c];
            break;
          }
      }
      rep.boundary_mass_fraction = edge / total;
    }
  } else {
    rep.fixed_point_residual = kInf;
  }
  return rep;
}

SurrogateEnvelope pde_surrogate_bound(SurrogateKind kind, const Measure& mu, double domain_diam, double K,
                                      const SurrogateOptions& opt, const Grid& grid) {
  const int N = grid.dim();
  require(mu.dim() == N, "pde_surrogate_bound: dimension mismatch");
  require(domain_diam > 0.0 && K > 0.0, "pde_surrogate_bound: diameter and K must be positive");
  SurrogateEnvelope env;
  PotentialParams pp;
  pp.dim = N;
  pp.T = 2.0 * domain_diam;
  Measure omega = mu;
  double scale = 0.0, shift = 0.0, lower_fraction = 0.0;
  if (kind == SurrogateKind::p_laplace) {
    const auto diags = check_p_laplace_dimension(N, opt.p);
    if (!diags.empty()) throw AdmissibilityError(diags.front().code, diags.front().message);
    pp.alpha = 1.0;
    pp.s = opt.p;
    scale = 2.0 * std::max(1.0, std::pow(4.0, (2.0 - opt.p) / (opt.p - 1.0))) * K;
    lower_fraction = 1.0 / 3.0;
    if (opt.background_M > 0.0) {
      const double eta = (opt.p - 1.0) * (opt.beta - 1.0) / opt.beta;
      const double level = opt.background_M / unit_density_maximal_norm(N, opt.p, pp.T, eta);
      const double pad = pp.T + grid.spacing;
      omega += Measure::box_uniform(grid.lower().array() - pad, grid.upper().array() + pad, level);
    }
  } else {
    const auto diags = check_k_hessian_dimension(N, opt.k);
    if (!diags.empty()) throw AdmissibilityError(diags.front().code, diags.front().message);
    pp.alpha = 2.0 * opt.k / (opt.k + 1.0);
    pp.s = opt.k + 1.0;
    scale = 2.0 * K;
    shift = opt.b;
    lower_fraction = 1.0 / 8.0;
  }
  env.alpha = pp.alpha;
  env.s = pp.s;
  env.upper = scale * grid_eval(PotentialKind::wolff, omega, pp, grid) + shift;
  if (opt.domain_box) {
    env.has_lower = true;
    const auto& [lo, hi] = *opt.domain_box;
    env.lower = Field::Zero(grid.size());
    parallel_for(grid.size(), [&](Index i) {
      const Point x = grid.node(i);
      const double d = std::min((x - lo).minCoeff(), (hi - x).minCoeff());
      if (d <= 0.0) return;
      PotentialParams local = pp;
      local.T = lower_fraction * d;
      env.lower[i] = wolff(mu, local, x) / K;
    });
  }
  return env;
}

}  // namespace wolffpot
