#include "wolffpot/potentials.hpp"

#include "wolffpot/parallel.hpp"
#include "wolffpot/quadrature.hpp"

#include <algorithm>
#include <numeric>

namespace wolffpot {

namespace {

double neg_power(double t, double gamma) { return std::isinf(t) ? 0.0 : std::pow(t, -gamma); }

void check_params(const Measure& m, const PotentialParams& pp, const Point& x) {
  require(pp.dim == m.dim(), "potential: params dimension does not match the measure");
  require(x.size() == m.dim(), "potential: point dimension does not match the measure");
  require(pp.T > 0.0, "potential: truncation T must be positive");
}

// Breakpoints in (0, T) where the mass profile around x is not smooth.
std::vector<double> profile_breaks(const Measure& m, const Point& x, double T,
                                   const std::vector<std::pair<double, double>>& pm) {
  std::vector<double> breaks;
  for (const auto& [d, w] : pm) breaks.push_back(d);
  for (double k : continuous_kinks(m, x)) breaks.push_back(k);
  breaks.push_back(continuous_saturation_radius(m, x));
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double b) { return !(b > 0.0 && b < T); }),
               breaks.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

}  // namespace

double radial_power_integral(const Measure& m, const Point& x, double T, double e, double gamma,
                             double rel_tol) {
  require(e > 0.0 && gamma > 0.0, "radial integral: exponents must be positive");
  const int N = m.dim();
  std::vector<std::pair<double, double>> pm;
  point_masses(m, x, T, pm);
  if (!pm.empty() && pm.front().first == 0.0) return kInf;

  if (!m.has_continuous()) {
    double S = 0.0, total = 0.0;
    for (std::size_t k = 0; k < pm.size(); ++k) {
      S += pm[k].second;
      const double a = pm[k].first;
      const double b = k + 1 < pm.size() ? pm[k + 1].first : T;
      if (b > a) total += std::pow(S, e) * (neg_power(a, gamma) - neg_power(b, gamma)) / gamma;
    }
    return total;
  }

  const double kappa = N * e - gamma;
  const double t_sat = continuous_saturation_radius(m, x);
  const double c_total = continuous_total_mass(m);
  std::vector<double> ends = profile_breaks(m, x, T, pm);
  ends.push_back(T);

  double total = 0.0;
  std::size_t next_atom = 0;
  double S = 0.0;

  // First piece (0, b0]: the continuous profile is homogeneous of degree N
  // below the first kink whenever the geometry is flat there.
  {
    double hi = ends.front();
    for (int shell = 0; shell < 2000; ++shell) {
      const double c_hi = continuous_ball_mass(m, x, hi);
      if (c_hi == 0.0) break;
      const double c_half = continuous_ball_mass(m, x, 0.5 * hi);
      if (std::abs(c_half * std::pow(2.0, N) - c_hi) <= 1e-12 * c_hi || hi < 1e-300) {
        total += std::pow(c_hi / std::pow(hi, N), e) * std::pow(hi, kappa) / kappa;
        break;
      }
      const double lo = 0.5 * hi;
      auto f = [&](double u) {
        const double t = std::exp(u);
        const double mass = continuous_ball_mass(m, x, t);
        return mass > 0.0 ? std::pow(mass, e) * std::exp(-gamma * u) : 0.0;
      };
      total += integrate<double>(f, std::log(lo), std::log(hi), 0.1 * rel_tol, 0.0, 30);
      hi = lo;
    }
  }

  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    const double a = ends[i];
    const double b = ends[i + 1];
    while (next_atom < pm.size() && pm[next_atom].first <= a) S += pm[next_atom++].second;
    if (!(b > a)) continue;
    if (a >= t_sat) {
      total += std::pow(S + c_total, e) * (neg_power(a, gamma) - neg_power(b, gamma)) / gamma;
      continue;
    }
    auto f = [&](double u) {
      const double t = std::exp(u);
      const double mass = S + continuous_ball_mass(m, x, t);
      return mass > 0.0 ? std::pow(mass, e) * std::exp(-gamma * u) : 0.0;
    };
    total += integrate<double>(f, std::log(a), std::log(b), 0.1 * rel_tol, 0.0, 30);
  }
  return total;
}

double wolff(const Measure& m, const PotentialParams& pp, const Point& x, double rel_tol) {
  check_params(m, pp, x);
  const int N = m.dim();
  require(pp.s > 1.0, "wolff: s must exceed 1");
  require(pp.alpha > 0.0 && pp.alpha * pp.s < N, "wolff: requires 0 < alpha*s < N");
  const double e = 1.0 / (pp.s - 1.0);
  const double gamma = (N - pp.alpha * pp.s) / (pp.s - 1.0);
  return radial_power_integral(m, x, pp.T, e, gamma, rel_tol);
}

double riesz(const Measure& m, const PotentialParams& pp, const Point& x, double rel_tol) {
  check_params(m, pp, x);
  const int N = m.dim();
  require(pp.alpha > 0.0 && pp.alpha < N, "riesz: requires 0 < alpha < N");
  return radial_power_integral(m, x, pp.T, 1.0, N - pp.alpha, rel_tol);
}

double frac_maximal(const Measure& m, const PotentialParams& pp, const Point& x) {
  check_params(m, pp, x);
  const int N = m.dim();
  require(pp.alpha > 0.0 && pp.alpha <= N, "frac_maximal: requires 0 < alpha <= N");
  require(pp.eta >= 0.0, "frac_maximal: eta must be >= 0");
  std::vector<std::pair<double, double>> pm;
  point_masses(m, x, pp.T, pm);
  if (!pm.empty() && pm.front().first == 0.0) return kInf;
  auto weight = [&](double t) { return std::pow(t, N - pp.alpha) * h_eta(t, pp.eta); };

  double best = 0.0;
  if (!m.has_continuous()) {
    // Between atoms the mass is constant and the weight increases, so the
    // supremum over each piece is its left limit.
    double S = 0.0;
    for (const auto& [d, w] : pm) {
      S += w;
      best = std::max(best, S / weight(d));
    }
    return best;
  }

  std::vector<double> ends = profile_breaks(m, x, pp.T, pm);
  if (std::isfinite(pp.T)) ends.push_back(pp.T);
  if (ends.empty()) return 0.0;
  std::size_t next_atom = 0;
  double S = 0.0;
  double a = 0.0;
  for (double b : ends) {
    while (next_atom < pm.size() && pm[next_atom].first <= a) S += pm[next_atom++].second;
    auto ratio = [&](double t) { return (S + continuous_ball_mass(m, x, t)) / weight(t); };
    if (a > 0.0) best = std::max(best, ratio(a));
    best = std::max(best, ratio(b));
    const double lo = a > 0.0 ? std::log(a) : std::log(b) - 20.0;
    const double hi = std::log(b);
    constexpr int samples = 24;
    std::vector<double> us(samples + 1), vals(samples + 1);
    int arg = 0;
    for (int k = 0; k <= samples; ++k) {
      us[k] = lo + (hi - lo) * k / samples;
      vals[k] = ratio(std::exp(us[k]));
      if (vals[k] > vals[arg]) arg = k;
    }
    best = std::max(best, vals[arg]);
    double left = us[std::max(0, arg - 1)];
    double right = us[std::min(samples, arg + 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = right - g * (right - left), d = left + g * (right - left);
    double fc = ratio(std::exp(c)), fd = ratio(std::exp(d));
    for (int it = 0; it < 80 && right - left > 1e-13; ++it) {
      if (fc > fd) {
        right = d;
        d = c;
        fd = fc;
        c = right - g * (right - left);
        fc = ratio(std::exp(c));
      } else {
        left = c;
        c = d;
        fc = fd;
        d = left + g * (right - left);
        fd = ratio(std::exp(d));
      }
    }
    best = std::max({best, fc, fd});
    a = b;
  }
  return best;
}

SupNormEstimate frac_maximal_sup_norm(const Measure& m, const PotentialParams& pp, const Grid& probes) {
  require(probes.dim() == m.dim(), "frac_maximal_sup_norm: dimension mismatch");
  SupNormEstimate est;
  est.probe_spacing = probes.spacing;
  if (m.has_atoms()) {
    est.value = kInf;
    return est;
  }
  Field values(probes.size());
  parallel_for(probes.size(), [&](Index i) { values[i] = frac_maximal(m, pp, probes.node(i)); });
  est.value = values.size() ? values.maxCoeff() : 0.0;
  return est;
}

double unit_density_maximal_norm(int N, double alpha, double R, double eta) {
  require(alpha > 0.0 && eta >= 0.0 && R > 0.0, "unit_density_maximal_norm: bad arguments");
  if (std::isinf(R)) return kInf;
  auto f = [&](double t) { return std::pow(t, alpha) / h_eta(t, eta); };
  double best = f(R);
  if (eta > 0.0) {
    const double t_star = std::exp(-eta / alpha);
    if (t_star < std::min(R, 0.5)) best = std::max(best, f(t_star));
  }
  return unit_ball_volume(N) * best;
}

Field grid_eval(PotentialKind kind, const Measure& m, const PotentialParams& pp, const Grid& grid) {
  require(grid.dim() == m.dim(), "grid_eval: dimension mismatch");
  Field out(grid.size());
  parallel_for(grid.size(), [&](Index i) {
    const Point x = grid.node(i);
    switch (kind) {
      case PotentialKind::wolff: out[i] = wolff(m, pp, x); break;
      case PotentialKind::riesz: out[i] = riesz(m, pp, x); break;
      case PotentialKind::frac_maximal: out[i] = frac_maximal(m, pp, x); break;
      case PotentialKind::bessel: out[i] = bessel_potential(m, pp.alpha, x); break;
    }
  });
  return out;
}

CellPotentialOperator::CellPotentialOperator(const Grid& grid, double e, double gamma, double T)
    : grid_(grid), e_(e), gamma_(gamma), T_(T) {
  require(e > 0.0 && gamma > 0.0 && T > 0.0, "cell operator: bad exponents");
  const int dim = grid.dim();
  std::vector<int> extent(dim);
  for (int d = 0; d < dim; ++d) extent[d] = 2 * grid.counts[d] - 2;
  const Index n = product(extent);
  std::vector<int> shifts;
  std::vector<double> dist;
  for (Index k = 0; k < n; ++k) {
    const auto multi = unravel_index(k, extent);
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double off = multi[d] - (grid.counts[d] - 1) + 0.5;
      s += off * off;
    }
    const double r = grid.spacing * std::sqrt(s);
    if (!(r < T)) continue;
    for (int d = 0; d < dim; ++d) shifts.push_back(multi[d] - (grid.counts[d] - 1));
    dist.push_back(r);
  }
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  shifts_.reserve(shifts.size());
  for (std::size_t o : order) {
    dist_.push_back(dist[o]);
    dist_pow_.push_back(std::pow(dist[o], -gamma));
    for (int d = 0; d < dim; ++d) shifts_.push_back(shifts[o * dim + d]);
  }
}

CellPotentialOperator CellPotentialOperator::wolff(const Grid& grid, const PotentialParams& pp) {
  const int N = grid.dim();
  require(pp.s > 1.0 && pp.alpha > 0.0 && pp.alpha * pp.s < N, "cell operator: requires 0 < alpha*s < N");
  return CellPotentialOperator(grid, 1.0 / (pp.s - 1.0), (N - pp.alpha * pp.s) / (pp.s - 1.0), pp.T);
}

CellPotentialOperator CellPotentialOperator::riesz(const Grid& grid, const PotentialParams& pp) {
  const int N = grid.dim();
  require(pp.alpha > 0.0 && pp.alpha < N, "cell operator: requires 0 < alpha < N");
  return CellPotentialOperator(grid, 1.0, N - pp.alpha, pp.T);
}

Field CellPotentialOperator::apply(const Field& cell_mass, const AtomicPart* atoms) const {
  require(cell_mass.size() == grid_.cell_count(), "cell operator: mass field size mismatch");
  const int dim = grid_.dim();
  const auto cells = grid_.cell_counts();
  const double p_end = neg_power(T_, gamma_);
  const bool unit_exponent = e_ == 1.0;
  Field out(grid_.size());
  parallel_for(grid_.size(), [&](Index i) {
    const auto node = grid_.unravel(i);
    const Point x = grid_.node(i);
    std::vector<std::pair<double, double>> extra;
    if (atoms) {
      for (std::size_t a = 0; a < atoms->masses.size(); ++a) {
        const double d = (atoms->locations[a] - x).norm();
        if (d < T_ && atoms->masses[a] > 0.0) extra.emplace_back(d, atoms->masses[a]);
      }
      std::stable_sort(extra.begin(), extra.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
    }
    double S = 0.0, total = 0.0, p_prev = 0.0;
    bool started = false;
    auto step = [&](double p, double mass) {
      if (started && p_prev > p && S > 0.0)
        total += (unit_exponent ? S : std::pow(S, e_)) * (p_prev - p) / gamma_;
      S += mass;
      p_prev = p;
      started = true;
    };
    std::size_t next_extra = 0;
    for (std::size_t k = 0; k < dist_.size(); ++k) {
      const int* shift = &shifts_[k * dim];
      Index linear = 0;
      bool valid = true;
      for (int d = 0; d < dim; ++d) {
        const int j = node[d] + shift[d];
        if (j < 0 || j >= cells[d]) {
          valid = false;
          break;
        }
        linear = linear * cells[d] + j;
      }
      if (!valid) continue;
      while (next_extra < extra.size() && extra[next_extra].first <= dist_[k]) {
        step(neg_power(extra[next_extra].first, gamma_), extra[next_extra].second);
        ++next_extra;
      }
      step(dist_pow_[k], cell_mass[linear]);
    }
    for (; next_extra < extra.size(); ++next_extra)
      step(neg_power(extra[next_extra].first, gamma_), extra[next_extra].second);
    if (started && p_prev > p_end && S > 0.0)
      total += (unit_exponent ? S : std::pow(S, e_)) * (p_prev - p_end) / gamma_;
    out[i] = total;
  });
  return out;
}

}  // namespace wolffpot
