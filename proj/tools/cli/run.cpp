#include "run.hpp"

#include "wolffpot/version.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wolffpot::cli {

namespace {

json field_json(const Field& f) {
  json out = json::array();
  for (Index i = 0; i < f.size(); ++i) out.push_back(number_json(f[i]));
  return out;
}

json vector_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number_json(x));
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One row per point: coordinates, then one column per field.
std::string csv_table(const std::vector<Point>& points, const std::vector<std::pair<std::string, const Field*>>& cols) {
  std::ostringstream os;
  const int dim = points.empty() ? 0 : static_cast<int>(points.front().size());
  for (int d = 0; d < dim; ++d) os << (d ? "," : "") << "x" << d;
  for (const auto& [name, f] : cols) os << "," << name;
  os << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int d = 0; d < dim; ++d) os << (d ? "," : "") << fmt(points[i][d]);
    for (const auto& [name, f] : cols) os << "," << fmt((*f)[static_cast<Index>(i)]);
    os << "\n";
  }
  return os.str();
}

std::vector<Point> grid_points(const Grid& g) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(g.size()));
  for (Index i = 0; i < g.size(); ++i) pts.push_back(g.node(i));
  return pts;
}

json solve_json(const SolveReport& r) {
  json j;
  j["status"] = to_string(r.status);
  j["converged"] = r.converged;
  j["diverged"] = r.diverged;
  j["iterations"] = r.iterations;
  j["iterates_sup_norm"] = vector_json(r.iterates_sup_norm);
  j["increments"] = vector_json(r.increments);
  j["residual"] = number_json(r.residual);
  j["fixed_point_residual"] = number_json(r.fixed_point_residual);
  j["apriori_margin"] = number_json(r.apriori_margin);
  j["max_bound_excess"] = number_json(r.max_bound_excess);
  j["monotone"] = r.monotone;
  j["boundary_mass_fraction"] = number_json(r.boundary_mass_fraction);
  j["mu_mass_outside_grid"] = number_json(r.mu_mass_outside_grid);
  j["smallness"] = {{"passed", r.smallness.passed},
                    {"sup_mu", number_json(r.smallness.sup_mu)},
                    {"sup_mu1", number_json(r.smallness.sup_mu1)},
                    {"M_used", number_json(r.smallness.M_used)},
                    {"eta", number_json(r.smallness.eta)},
                    {"probe_spacing", number_json(r.smallness.probe_spacing)},
                    {"structural", r.smallness.structural}};
  j["constants"] = {{"c_p", number_json(r.constants.c_p)},
                    {"c_a_eps", number_json(r.constants.c_a_eps)},
                    {"a_bar", number_json(r.constants.a_bar)}};
  j["solution"] = field_json(r.solution);
  j["bound"] = field_json(r.bound);
  return j;
}

int solve_exit(const SolveReport& r) {
  if (r.converged) return kExitOk;
  if (r.diverged) return kExitDivergence;
  return kExitNonconvergence;
}

void run_potential(const RunConfig& cfg, RunResult& res) {
  const auto& sec = *cfg.potential;
  std::vector<Point> points = sec.points.empty() ? grid_points(cfg.grid) : sec.points;
  Field values(static_cast<Index>(points.size()));
  if (sec.points.empty()) {
    values = grid_eval(sec.kind, cfg.measure, sec.pp, cfg.grid);
  } else {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Point& x = points[i];
      double v = 0.0;
      switch (sec.kind) {
        case PotentialKind::wolff: v = wolff(cfg.measure, sec.pp, x, sec.rel_tol); break;
        case PotentialKind::riesz: v = riesz(cfg.measure, sec.pp, x, sec.rel_tol); break;
        case PotentialKind::frac_maximal: v = frac_maximal(cfg.measure, sec.pp, x); break;
        case PotentialKind::bessel: v = bessel_potential(cfg.measure, sec.pp.alpha, x); break;
      }
      values[static_cast<Index>(i)] = v;
    }
  }
  json out;
  out["count"] = values.size();
  out["on_grid"] = sec.points.empty();
  out["min"] = number_json(values.size() ? values.minCoeff() : 0.0);
  out["max"] = number_json(values.size() ? values.maxCoeff() : 0.0);
  out["values"] = field_json(values);
  res.report["outputs"] = out;
  res.report["status"] = "ok";
  res.csv = csv_table(points, {{"value", &values}});
}

void run_solve(const RunConfig& cfg, RunResult& res) {
  const SolveReport r = picard_solve(*cfg.problem);
  res.report["outputs"] = solve_json(r);
  res.report["status"] = to_string(r.status);
  res.exit_code = solve_exit(r);
  if (r.solution.size() == cfg.grid.size()) {
    const Field bound = r.bound.size() == r.solution.size() ? r.bound : Field::Constant(r.solution.size(), kInf);
    res.csv = csv_table(grid_points(cfg.grid), {{"u", &r.solution}, {"bound", &bound}});
  }
}

CapacityEstimate estimate(const CompactSet& E, const CapacitySection& c, const OrliczPair& q, int start) {
  CapacityOptions opt = c.options;
  opt.random_start = start > 0;
  opt.seed = c.options.seed + static_cast<std::uint64_t>(std::max(0, start - 1));
  return capacity_upper(E, q, c.alpha_p, c.kernel, c.grid, opt);
}

json capacity_json(const CompactSet& E, const CapacitySection& c, const OrliczPair& q, bool& all_converged) {
  json estimates = json::array();
  double lo = kInf, hi = 0.0;
  for (int s = 0; s < c.starts; ++s) {
    const auto est = estimate(E, c, q, s);
    all_converged = all_converged && est.converged;
    lo = std::min(lo, est.upper_bound);
    hi = std::max(hi, est.upper_bound);
    estimates.push_back({{"start", s},
                         {"random_start", s > 0},
                         {"upper_bound", number_json(est.upper_bound)},
                         {"dual_lower_bound", number_json(est.dual_lower_bound)},
                         {"constraint_violation", number_json(est.constraint_violation)},
                         {"iterations", est.iterations},
                         {"probes", est.probes},
                         {"converged", est.converged}});
  }
  return {{"capacity", number_json(lo)},
          {"spread", number_json(lo > 0.0 ? (hi - lo) / lo : 0.0)},
          {"estimates", estimates}};
}

void run_capacity(const RunConfig& cfg, RunResult& res) {
  const auto& c = *cfg.capacity;
  const OrliczPair q(c.p, c.l, c.beta);
  json sets = json::array();
  bool converged = true;
  for (const auto& E : c.sets) sets.push_back(capacity_json(E, c, q, converged));
  res.report["outputs"] = {{"kernel", to_string(c.kernel)}, {"sets", sets}};
  res.report["status"] = converged ? "converged" : "not_converged";
  res.exit_code = converged ? kExitOk : kExitNonconvergence;
}

void run_verify(const RunConfig& cfg, RunResult& res) {
  const auto& v = *cfg.verify;
  json out;
  out["experiment"] = v.experiment;
  res.report["status"] = "ok";
  if (v.experiment == "sandwich") {
    const auto r = sandwich(cfg.measure, cfg.potential->pp, v.q, v.sandwich_variant, cfg.grid);
    out["variant"] = to_string(v.sandwich_variant);
    out["q"] = number_json(r.q);
    out["lhs_integral"] = number_json(r.lhs_integral);
    out["mid_integral"] = number_json(r.mid_integral);
    out["implied_lower_c"] = number_json(r.implied_lower_c);
    out["implied_upper_c"] = number_json(r.implied_upper_c);
    out["ratio"] = number_json(r.ratio);
    out["degenerate"] = r.degenerate;
  } else if (v.experiment == "exp_integrability") {
    const auto r = exp_integrability(cfg.measure, cfg.potential->pp, v.center, v.radius, v.delta, cfg.grid);
    out["average"] = number_json(r.average);
    out["maximal_norm"] = number_json(r.maximal_norm);
    out["delta"] = number_json(r.delta);
    out["nodes"] = r.nodes;
  } else if (v.experiment == "composition_bound") {
    CompositionOptions opt;
    opt.delta = v.delta;
    opt.support_radius = v.support_radius;
    const auto r = composition_bound(cfg.measure, cfg.potential->pp, *cfg.reaction, v.composition_variant, cfg.grid, opt);
    out["variant"] = to_string(v.composition_variant);
    out["lhs_sup"] = number_json(r.lhs_sup);
    out["ratio_sup"] = number_json(r.ratio_sup);
    out["delta"] = number_json(r.delta);
    out["normalization"] = number_json(r.normalization);
    out["normalized"] = r.normalized;
    out["overflow"] = r.overflow;
  } else if (v.experiment == "pde_surrogate") {
    const auto env = pde_surrogate_bound(v.surrogate, cfg.measure, v.domain_diam, v.K, v.surrogate_options, cfg.grid);
    out["kind"] = v.surrogate == SurrogateKind::k_hessian ? "k_hessian" : "p_laplace";
    out["alpha"] = number_json(env.alpha);
    out["s"] = number_json(env.s);
    out["upper"] = field_json(env.upper);
    out["lower"] = env.has_lower ? field_json(env.lower) : json(nullptr);
    const Field lower = env.has_lower ? env.lower : Field::Constant(env.upper.size(), std::nan(""));
    res.csv = csv_table(grid_points(cfg.grid), {{"upper", &env.upper}, {"lower", &lower}});
  } else {
    const SolveReport r = picard_solve(*cfg.problem);
    out["solve"] = solve_json(r);
    res.exit_code = solve_exit(r);
    res.report["status"] = to_string(r.status);
    if (r.converged) {
      const auto& c = *cfg.capacity;
      const OrliczPair q(c.p, c.l, c.beta);
      const auto ratios = necessary_condition_ratio(cfg.grid, r.solution, cfg.problem->mu, cfg.problem->nl, q,
                                                    c.alpha_p, c.kernel, c.sets, c.grid, c.options);
      json list = json::array();
      for (const auto& x : ratios)
        list.push_back({{"numerator", number_json(x.numerator)},
                        {"capacity", number_json(x.capacity)},
                        {"ratio", number_json(x.ratio)}});
      out["ratios"] = list;
    }
  }
  res.report["outputs"] = out;
}

}  // namespace

json issues_json(const std::vector<Issue>& issues) {
  json out = json::array();
  for (const auto& i : issues)
    out.push_back({{"category", i.category}, {"code", i.code}, {"path", i.path}, {"message", i.message}});
  return out;
}

RunResult execute(const Validation& validation) {
  RunResult res;
  if (validation.has_schema_issues() || !validation.config) {
    res.exit_code = kExitSchema;
    for (const auto& i : validation.issues) res.errors.push_back("schema: " + i.path + ": " + i.message);
    return res;
  }
  if (validation.has_admissibility_issues()) {
    res.exit_code = kExitAdmissibility;
    for (const auto& i : validation.issues) res.errors.push_back("admissibility: " + i.path + ": " + i.message);
    return res;
  }
  const RunConfig& cfg = *validation.config;
  res.report["tool"] = "wolffpot";
  res.report["version"] = kVersion;
  res.report["config"] = validation.effective;
  try {
    if (cfg.task == "potential") run_potential(cfg, res);
    if (cfg.task == "solve") run_solve(cfg, res);
    if (cfg.task == "capacity") run_capacity(cfg, res);
    if (cfg.task == "verify") run_verify(cfg, res);
  } catch (const AdmissibilityError& e) {
    res = RunResult{};
    res.exit_code = kExitAdmissibility;
    res.errors.push_back("admissibility: " + e.code() + ": " + e.what());
    return res;
  } catch (const InvalidArgument& e) {
    res = RunResult{};
    res.exit_code = kExitSchema;
    res.errors.push_back(std::string("input: ") + e.what());
    return res;
  }
  res.report["exit_code"] = res.exit_code;
  const std::string status = res.report.value("status", std::string());
  if (res.exit_code == kExitDivergence) res.errors.push_back("divergence: " + status);
  if (res.exit_code == kExitNonconvergence) res.errors.push_back("nonconvergence: " + status);
  return res;
}

Validation load_and_validate(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    Validation v;
    v.issues.push_back({"schema", "unreadable", "", "cannot open config file '" + config_path + "'"});
    return v;
  }
  json input;
  try {
    input = json::parse(in);
  } catch (const json::parse_error& e) {
    Validation v;
    v.issues.push_back({"schema", "parse_error", "", e.what()});
    return v;
  }
  return validate_config(input);
}

int run_command(const std::string& config_path, const std::string& output_dir, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::exists(config_path)) {
    err << "error: config file '" << config_path << "' does not exist\n";
    return kExitIo;
  }
  const Validation validation = load_and_validate(config_path);
  const RunResult res = execute(validation);
  for (const auto& e : res.errors) err << "error[" << res.exit_code << "] " << e << "\n";
  if (res.report.is_null()) return res.exit_code;

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  const fs::path dir(output_dir);
  const RunConfig& cfg = *validation.config;
  {
    std::ofstream f(dir / cfg.report_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write report to '" << (dir / cfg.report_path).string() << "'\n";
      return kExitIo;
    }
    f << res.report.dump(2) << "\n";
  }
  if (cfg.csv_path && !res.csv.empty()) {
    std::ofstream f(dir / *cfg.csv_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write CSV to '" << (dir / *cfg.csv_path).string() << "'\n";
      return kExitIo;
    }
    f << res.csv;
  }
  out << "status: " << res.report.value("status", std::string("ok")) << "\n";
  out << "report: " << (dir / cfg.report_path).string() << "\n";
  return res.exit_code;
}

int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::exists(config_path)) {
    err << "error: config file '" << config_path << "' does not exist\n";
    return kExitIo;
  }
  const Validation v = load_and_validate(config_path);
  json report;
  report["valid"] = v.issues.empty();
  report["diagnostics"] = issues_json(v.issues);
  if (v.config) report["effective_config"] = v.effective;
  out << report.dump(2) << "\n";
  return kExitOk;
}

}  // namespace wolffpot::cli
