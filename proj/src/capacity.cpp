#include "wolffpot/capacity.hpp"

#include "wolffpot/parallel.hpp"
#include "wolffpot/potentials.hpp"

#include <algorithm>
#include <random>

namespace wolffpot {

CompactSet CompactSet::ball(const Point& center, double radius) {
  require(radius > 0.0, "compact set: radius must be positive");
  CompactSet E;
  E.dim = static_cast<int>(center.size());
  E.balls.push_back({center, radius});
  return E;
}

bool CompactSet::contains(const Point& x) const {
  for (const auto& b : balls)
    if ((x - b.center).norm() <= b.radius) return true;
  for (const auto& b : boxes)
    if ((x.array() >= b.lower.array()).all() && (x.array() <= b.upper.array()).all()) return true;
  return false;
}

std::string to_string(KernelKind k) { return k == KernelKind::bessel ? "bessel" : "riesz"; }

double capacity_kernel(KernelKind kind, int N, double alpha_p, double r) {
  if (kind == KernelKind::bessel) return bessel_kernel(N, alpha_p, r);
  return riesz_kernel<double>(N, alpha_p, r);
}

std::vector<Point> capacity_probes(const CompactSet& E, const Grid& grid) {
  require(E.dim == grid.dim(), "capacity probes: dimension mismatch");
  const int N = grid.dim();
  const double h = grid.spacing;
  std::vector<Point> probes;
  for (Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.node(i);
    if (E.contains(x)) probes.push_back(x);
  }
  for (const auto& b : E.balls) {
    if (N == 2) {
      const int n = std::max(8, static_cast<int>(std::ceil(2.0 * EIGEN_PI * b.radius / h)));
      for (int k = 0; k < n; ++k) {
        const double th = 2.0 * EIGEN_PI * k / n;
        probes.push_back(b.center + b.radius * Point(Eigen::Vector2d(std::cos(th), std::sin(th))));
      }
    } else if (N == 3) {
      const int n = std::max(16, static_cast<int>(std::ceil(4.0 * EIGEN_PI * b.radius * b.radius / (h * h))));
      const double golden = EIGEN_PI * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < n; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / n;
        const double rho = std::sqrt(1.0 - z * z);
        probes.push_back(b.center + b.radius * Point(Eigen::Vector3d(rho * std::cos(golden * k),
                                                                     rho * std::sin(golden * k), z)));
      }
    }
  }
  for (const auto& b : E.boxes) {
    for (int d = 0; d < N; ++d) {
      std::vector<int> ext(N, 1);
      for (int j = 0; j < N; ++j)
        if (j != d) ext[j] = static_cast<int>(std::ceil((b.upper[j] - b.lower[j]) / h)) + 1;
      const Index n = product(ext);
      for (double side : {b.lower[d], b.upper[d]}) {
        for (Index k = 0; k < n; ++k) {
          const auto multi = unravel_index(k, ext);
          Point x(N);
          for (int j = 0; j < N; ++j)
            x[j] = j == d ? side : b.lower[j] + (b.upper[j] - b.lower[j]) * multi[j] / std::max(1, ext[j] - 1);
          probes.push_back(x);
        }
      }
    }
  }
  return probes;
}

namespace {

// Kernel mass of one cell seen from x. Near cells are split into subcells,
// more finely the closer they are, to follow the singularity.
template <typename Kernel>
double cell_kernel(const Kernel& kernel, int N, const Point& x, const Point& center, double h) {
  const double vol = std::pow(h, N);
  const double r = (x - center).norm();
  if (r >= 3.0 * h) return vol * kernel(r);
  const int sub = r >= h ? 4 : 8;
  std::vector<int> ext(N, sub);
  const Index n = product(ext);
  double acc = 0.0;
  Point y(N);
  for (Index k = 0; k < n; ++k) {
    const auto multi = unravel_index(k, ext);
    for (int d = 0; d < N; ++d) y[d] = center[d] - 0.5 * h + h * (multi[d] + 0.5) / sub;
    acc += kernel((x - y).norm());
  }
  return vol * acc / static_cast<double>(n);
}

struct DualState {
  Eigen::VectorXd g;  // A^T lambda / v
  Eigen::VectorXd f;  // Q'(g)
  Eigen::VectorXd Af;
  double value = 0.0;
};

}  // namespace

CapacityEstimate capacity_upper(const CompactSet& E, const OrliczPair& q, double alpha_p, KernelKind kernel,
                                const Grid& grid, const CapacityOptions& options) {
  const int N = grid.dim();
  require(E.dim == N, "capacity_upper: dimension mismatch");
  require(alpha_p > 0.0, "capacity_upper: alpha_p must be positive");
  require(kernel == KernelKind::bessel || alpha_p < N, "capacity_upper: Riesz kernel needs alpha_p < N");
  CapacityEstimate est;
  est.kernel = kernel;
  est.discretization = grid;
  const Index n = grid.cell_count();
  est.feasible_f = Field::Zero(n);
  const std::vector<Point> probes = E.empty() ? std::vector<Point>{} : capacity_probes(E, grid);
  est.probes = static_cast<int>(probes.size());
  if (probes.empty()) {
    est.converged = true;
    return est;
  }
  const Index m = static_cast<Index>(probes.size());
  const double v = grid.cell_volume();
  const double h = grid.spacing;

  Eigen::MatrixXd A(m, n);
  std::vector<Point> centers(n);
  for (Index j = 0; j < n; ++j) centers[j] = grid.cell_center(j);
  auto fill = [&](const auto& g) {
    parallel_for(m, [&](Index i) {
      for (Index j = 0; j < n; ++j) A(i, j) = cell_kernel(g, N, probes[i], centers[j], h);
    });
  };
  if (kernel == KernelKind::bessel) {
    fill(BesselKernelTable(N, alpha_p, 1e-3 * h / 8.0));
  } else {
    fill([&](double r) { return riesz_kernel<double>(N, alpha_p, r); });
  }

  auto evaluate = [&](const Eigen::VectorXd& lambda) {
    DualState s;
    s.g = A.transpose() * lambda / v;
    s.f.resize(n);
    double penalty = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double gj = std::max(0.0, s.g[j]);
      s.f[j] = q.Q_prime(gj);
      penalty += q.Q(gj);
    }
    s.Af = A * s.f;
    s.value = lambda.sum() - v * penalty;
    return s;
  };
  auto primal_value = [&](const Eigen::VectorXd& f) {
    double total = 0.0;
    for (Index j = 0; j < n; ++j) total += q.Q_star(f[j]);
    return v * total;
  };

  double best_upper = kInf;
  Eigen::VectorXd best_f;
  auto offer_primal = [&](const Eigen::VectorXd& f, const Eigen::VectorXd& Af) {
    const double lowest = Af.minCoeff();
    if (!(lowest > 0.0) || !f.allFinite()) return;
    const Eigen::VectorXd scaled = f / lowest;
    const double value = primal_value(scaled);
    if (value < best_upper) {
      best_upper = value;
      best_f = scaled;
    }
  };
  {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    offer_primal(ones, A * ones);
  }

  // Starting point scaled so that the first primal candidate is of order one.
  const double row_max = A.rowwise().sum().maxCoeff();
  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(m, v / (row_max * std::max<Index>(1, m)));
  if (options.random_start) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unif(0.25, 1.75);
    for (Index i = 0; i < m; ++i) lambda[i] *= unif(rng);
  }

  DualState current = evaluate(lambda);
  double best_dual = current.value;
  offer_primal(current.f, current.Af);
  Eigen::VectorXd previous = lambda;
  double momentum = 1.0;
  double tau = 1.0;
  int it = 0;
  for (; it < options.max_iters; ++it) {
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    Eigen::VectorXd y = lambda + ((momentum - 1.0) / next_momentum) * (lambda - previous);
    DualState at_y = evaluate(y);
    if (!std::isfinite(at_y.value)) {
      y = lambda;
      at_y = current;
    }
    const Eigen::VectorXd grad = Eigen::VectorXd::Ones(m) - at_y.Af;
    Eigen::VectorXd candidate;
    DualState at_c;
    for (int bt = 0; bt < 60; ++bt) {
      candidate = (y + tau * grad).cwiseMax(0.0);
      at_c = evaluate(candidate);
      const Eigen::VectorXd step = candidate - y;
      const double model = at_y.value + grad.dot(step) - step.squaredNorm() / (2.0 * tau);
      if (std::isfinite(at_c.value) && at_c.value >= model) break;
      tau *= 0.5;
    }
    if (at_c.value < current.value) {
      // Momentum overshoot: restart from the last iterate.
      momentum = 1.0;
      previous = lambda;
      continue;
    }
    previous = lambda;
    lambda = candidate;
    current = at_c;
    momentum = next_momentum;
    tau *= 1.25;
    best_dual = std::max(best_dual, current.value);
    if (it % 5 == 0) offer_primal(current.f, current.Af);
    if (std::isfinite(best_upper) && best_upper - best_dual <= options.gap_tol * best_upper) {
      est.converged = true;
      break;
    }
  }
  offer_primal(current.f, current.Af);
  if (std::isfinite(best_upper) && best_upper - best_dual <= options.gap_tol * best_upper) est.converged = true;
  est.iterations = it;
  est.upper_bound = best_upper;
  est.dual_lower_bound = std::max(0.0, best_dual);
  est.feasible_f = best_f.array();
  est.constraint_violation = std::max(0.0, 1.0 - (A * best_f).minCoeff());
  return est;
}

double measure_of_set(const Measure& m, const CompactSet& E, int samples_per_axis) {
  require(E.dim == m.dim(), "measure_of_set: dimension mismatch");
  const int N = m.dim();
  double total = 0.0;
  Measure diffuse(N);
  for (const auto& part : m.parts()) {
    if (const auto* a = std::get_if<AtomicPart>(&part)) {
      for (std::size_t i = 0; i < a->masses.size(); ++i)
        if (E.contains(a->locations[i])) total += a->masses[i];
    } else {
      diffuse += from_part(N, part);
    }
  }
  if (diffuse.parts().empty() || E.empty()) return total;
  if (E.balls.size() == 1 && E.boxes.empty()) return total + ball_mass(diffuse, E.balls[0].center, E.balls[0].radius);

  Point lo = Point::Constant(N, kInf), hi = Point::Constant(N, -kInf);
  for (const auto& b : E.balls) {
    lo = lo.cwiseMin(Point(b.center.array() - b.radius));
    hi = hi.cwiseMax(Point(b.center.array() + b.radius));
  }
  for (const auto& b : E.boxes) {
    lo = lo.cwiseMin(b.lower);
    hi = hi.cwiseMax(b.upper);
  }
  std::vector<int> ext(N, samples_per_axis);
  const Point step = (hi - lo) / samples_per_axis;
  const double w = step.prod();
  Point y(N);
  for (Index k = 0; k < product(ext); ++k) {
    const auto multi = unravel_index(k, ext);
    for (int d = 0; d < N; ++d) y[d] = lo[d] + step[d] * (multi[d] + 0.5);
    if (E.contains(y)) total += density_at(diffuse, y) * w;
  }
  return total;
}

std::vector<NecessaryConditionRatio> necessary_condition_ratio(
    const Grid& u_grid, const Field& u, const Measure& mu, const ExpNonlinearity& nl, const OrliczPair& q,
    double alpha_p, KernelKind kernel, const std::vector<CompactSet>& sample_sets, const Grid& capacity_grid,
    const CapacityOptions& options) {
  require(u.size() == u_grid.size(), "necessary_condition_ratio: field size mismatch");
  std::vector<NecessaryConditionRatio> out;
  for (const auto& E : sample_sets) {
    NecessaryConditionRatio r;
    r.numerator = integrate_over_set(u_grid, u, E, [&](double s) { return nl(s); }) + measure_of_set(mu, E);
    r.capacity = capacity_upper(E, q, alpha_p, kernel, capacity_grid, options).upper_bound;
    if (r.capacity > 0.0)
      r.ratio = r.numerator / r.capacity;
    else
      r.ratio = r.numerator > 0.0 ? kInf : 0.0;
    out.push_back(r);
  }
  return out;
}

}  // namespace wolffpot
