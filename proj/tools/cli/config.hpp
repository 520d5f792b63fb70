#pragma once

#include "wolffpot/capacity.hpp"
#include "wolffpot/inequality_lab.hpp"
#include "wolffpot/solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace wolffpot::cli {

using json = nlohmann::json;

inline constexpr int kConfigVersion = 1;

/// One finding from validation. category is "schema" or "admissibility".
struct Issue {
  std::string category;
  std::string code;
  std::string path;
  std::string message;
};

struct PotentialSection {
  PotentialKind kind = PotentialKind::wolff;
  PotentialParams pp;
  double rel_tol = 1e-8;
  std::vector<Point> points;  // empty: evaluate on the grid
};

struct CapacitySection {
  std::vector<CompactSet> sets;
  double p = 2.0;
  int l = 1;
  double beta = 1.0;
  double alpha_p = 1.0;
  KernelKind kernel = KernelKind::bessel;
  Grid grid;
  CapacityOptions options;
  int starts = 1;
};

struct VerifySection {
  std::string experiment;
  double q = 1.0;
  SandwichVariant sandwich_variant = SandwichVariant::wolff_riesz;
  Point center;
  double radius = 0.0;
  std::optional<double> delta;
  CompositionVariant composition_variant = CompositionVariant::exp_sup;
  double support_radius = 1.0;
  SurrogateKind surrogate = SurrogateKind::p_laplace;
  SurrogateOptions surrogate_options;
  double domain_diam = 1.0;
  double K = 1.0;
};

/// Typed view of a validated config.
struct RunConfig {
  std::string task;
  int dim = 2;
  Grid grid;
  Measure measure{2};
  std::optional<PotentialSection> potential;
  std::optional<ExpNonlinearity> reaction;
  std::optional<ProblemSpec> problem;  // solve and necessary_condition
  std::optional<CapacitySection> capacity;
  std::optional<VerifySection> verify;
  std::string report_path;
  std::optional<std::string> csv_path;
};

struct Validation {
  json effective;             // input with every default written out
  std::vector<Issue> issues;  // schema issues first, then admissibility
  std::optional<RunConfig> config;  // set when there are no schema issues

  bool has_schema_issues() const;
  bool has_admissibility_issues() const;
};

/// Schema and admissibility checks. Never throws on malformed input.
Validation validate_config(const json& input);

/// +inf as "inf", -inf as "-inf", NaN as "nan"; finite values unchanged.
json number_json(double v);

}  // namespace wolffpot::cli
