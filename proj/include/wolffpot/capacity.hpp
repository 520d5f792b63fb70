#pragma once

#include "wolffpot/grid.hpp"
#include "wolffpot/measure.hpp"
#include "wolffpot/nonlinearity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wolffpot {

struct BallRegion {
  Point center;
  double radius = 0.0;
};

struct BoxRegion {
  Point lower;
  Point upper;
};

/// Finite union of closed balls and boxes.
struct CompactSet {
  int dim = 2;
  std::vector<BallRegion> balls;
  std::vector<BoxRegion> boxes;

  static CompactSet ball(const Point& center, double radius);
  bool empty() const { return balls.empty() && boxes.empty(); }
  bool contains(const Point& x) const;
};

enum class KernelKind { bessel, riesz };
std::string to_string(KernelKind k);

/// Kernel of order alpha_p: G_{alpha_p} or (N - alpha_p)^{-1} |z|^{-(N - alpha_p)}.
double capacity_kernel(KernelKind kind, int N, double alpha_p, double r);

struct CapacityOptions {
  int max_iters = 4000;
  double gap_tol = 1e-3;       // relative duality gap that counts as converged
  bool random_start = false;   // start the dual ascent from a seeded random point
  std::uint64_t seed = 1;
};

/// Upper bound for inf { ∫ Q*(f) : f >= 0, K * f >= 1 on E } with f piecewise
/// constant on the cells of `grid`. The constraint is imposed at grid nodes
/// inside E and at boundary samples of E.
struct CapacityEstimate {
  double upper_bound = 0.0;
  double dual_lower_bound = 0.0;  // certifies the discrete problem only
  Field feasible_f;               // cell values
  double constraint_violation = 0.0;
  KernelKind kernel = KernelKind::bessel;
  Grid discretization;
  int iterations = 0;
  int probes = 0;
  bool converged = false;
};

CapacityEstimate capacity_upper(const CompactSet& E, const OrliczPair& q, double alpha_p, KernelKind kernel,
                                const Grid& grid, const CapacityOptions& options = {});

/// Constraint points used for E: nodes of `grid` inside E plus boundary samples.
std::vector<Point> capacity_probes(const CompactSet& E, const Grid& grid);

/// mu(E) for a closed union of balls and boxes.
double measure_of_set(const Measure& m, const CompactSet& E, int samples_per_axis = 256);

/// ∫_E g(u) dx for a nodal field u, using multilinear interpolation.
template <typename G>
double integrate_over_set(const Grid& grid, const Field& u, const CompactSet& E, G&& g, int sub = 8);

struct NecessaryConditionRatio {
  double numerator = 0.0;  // ∫_E P(u) + mu(E)
  double capacity = 0.0;
  double ratio = 0.0;
};

/// (∫_E P(u) + mu(E)) / Cap(E) for each sample set.
std::vector<NecessaryConditionRatio> necessary_condition_ratio(
    const Grid& u_grid, const Field& u, const Measure& mu, const ExpNonlinearity& nl, const OrliczPair& q,
    double alpha_p, KernelKind kernel, const std::vector<CompactSet>& sample_sets, const Grid& capacity_grid,
    const CapacityOptions& options = {});

}  // namespace wolffpot

#include "wolffpot/capacity_impl.hpp"
