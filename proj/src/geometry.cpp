#include "wolffpot/geometry.hpp"

#include "wolffpot/quadrature.hpp"

#include <algorithm>
#include <vector>

namespace wolffpot {

double sin_power_integral(int n, double psi) {
  if (psi <= 0.0) return 0.0;
  if (n == 0) return psi;
  if (psi <= 1.0) {
    // The reduction formula cancels for small psi; the integrand is positive.
    auto f = [n](double v) { return std::pow(std::sin(v), n); };
    return integrate<double>(f, 0.0, psi, 1e-14, 0.0, 20);
  }
  if (n == 1) return 1.0 - std::cos(psi);
  return -std::pow(std::sin(psi), n - 1) * std::cos(psi) / n + (n - 1.0) / n * sin_power_integral(n - 2, psi);
}

double cap_volume(int n, double R, double H) {
  if (H <= 0.0) return 0.0;
  const double full = unit_ball_volume(n) * std::pow(R, n);
  if (H >= 2.0 * R) return full;
  if (H > R) return full - cap_volume(n, R, 2.0 * R - H);
  if (n == 1) return H;
  const double psi = 2.0 * std::asin(std::sqrt(H / (2.0 * R)));
  return unit_ball_volume(n - 1) * std::pow(R, n) * sin_power_integral(n, psi);
}

double ball_ball_volume(int n, double d, double t, double r) {
  if (t <= 0.0 || r <= 0.0) return 0.0;
  if (d >= t + r) return 0.0;
  const double small = std::min(t, r);
  if (d + small <= std::max(t, r)) return unit_ball_volume(n) * std::pow(small, n);
  // Split along the radical hyperplane. Cap heights in factored form stay
  // accurate when one ball is tiny.
  const double h_t = (r - d + t) * (r + d - t) / (2.0 * d);
  const double h_r = (t - d + r) * (t + d - r) / (2.0 * d);
  const double v = cap_volume(n, t, h_t) + cap_volume(n, r, h_r);
  return std::clamp(v, 0.0, unit_ball_volume(n) * std::pow(small, n));
}

namespace {

double ball_box_impl(const double* x, double t, const double* lo, const double* hi, int k,
                     double rel_tol) {
  if (t <= 0.0) return 0.0;
  double dist2 = 0.0;
  double far2 = 0.0;
  bool contained = true;
  for (int j = 0; j < k; ++j) {
    if (x[j] < lo[j]) dist2 += (lo[j] - x[j]) * (lo[j] - x[j]);
    if (x[j] > hi[j]) dist2 += (x[j] - hi[j]) * (x[j] - hi[j]);
    far2 += std::max((x[j] - lo[j]) * (x[j] - lo[j]), (x[j] - hi[j]) * (x[j] - hi[j]));
    if (x[j] - t < lo[j] || x[j] + t > hi[j]) contained = false;
  }
  if (dist2 >= t * t) return 0.0;
  if (contained) return unit_ball_volume(k) * std::pow(t, k);
  if (far2 <= t * t) {
    double vol = 1.0;
    for (int j = 0; j < k; ++j) vol *= hi[j] - lo[j];
    return vol;
  }
  // Offsets relative to x keep tiny radii accurate.
  const double zlo = std::max(-t, lo[0] - x[0]);
  const double zhi = std::min(t, hi[0] - x[0]);
  if (k == 1) return std::max(0.0, zhi - zlo);
  if (zhi <= zlo) return 0.0;
  const double phi_a = std::asin(std::clamp(zlo / t, -1.0, 1.0));
  const double phi_b = std::asin(std::clamp(zhi / t, -1.0, 1.0));

  // Slice radius rho = t cos(phi); the slice volume is piecewise smooth in rho.
  std::vector<double> radii;
  const int m = k - 1;
  int combos = 1;
  for (int j = 0; j < m; ++j) combos *= 3;
  for (int c = 1; c < combos; ++c) {
    double s = 0.0;
    int code = c;
    for (int j = 0; j < m; ++j) {
      const int pick = code % 3;
      code /= 3;
      if (pick == 1) s += (x[j + 1] - lo[j + 1]) * (x[j + 1] - lo[j + 1]);
      if (pick == 2) s += (x[j + 1] - hi[j + 1]) * (x[j + 1] - hi[j + 1]);
    }
    radii.push_back(std::sqrt(s));
  }
  std::vector<double> cuts = {phi_a, phi_b};
  for (double rho : radii) {
    if (rho <= 0.0 || rho >= t) continue;
    const double phi = std::acos(rho / t);
    for (double c : {phi, -phi})
      if (c > phi_a && c < phi_b) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());

  const double scale = unit_ball_volume(k) * std::pow(t, k);
  auto slice = [&](double phi) {
    const double rho = t * std::cos(phi);
    return t * std::cos(phi) * ball_box_impl(x + 1, rho, lo + 1, hi + 1, m, rel_tol);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += integrate<double>(slice, cuts[i], cuts[i + 1], rel_tol, rel_tol * scale * 1e-2, 30);
  }
  return std::clamp(total, 0.0, scale);
}

}  // namespace

double ball_box_volume(const Point& x, double t, const Point& lo, const Point& hi, double rel_tol) {
  const int k = static_cast<int>(x.size());
  return ball_box_impl(x.data(), t, lo.data(), hi.data(), k, rel_tol);
}

std::vector<double> ball_box_kinks(const Point& x, const Point& lo, const Point& hi) {
  const int k = static_cast<int>(x.size());
  std::vector<double> radii;
  int combos = 1;
  for (int j = 0; j < k; ++j) combos *= 3;
  for (int c = 1; c < combos; ++c) {
    double s = 0.0;
    int code = c;
    for (int j = 0; j < k; ++j) {
      const int pick = code % 3;
      code /= 3;
      if (pick == 1) s += (x[j] - lo[j]) * (x[j] - lo[j]);
      if (pick == 2) s += (x[j] - hi[j]) * (x[j] - hi[j]);
    }
    if (s > 0.0) radii.push_back(std::sqrt(s));
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

}  // namespace wolffpot
