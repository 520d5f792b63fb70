#pragma once

#include "wolffpot/core.hpp"

#include <algorithm>
#include <cmath>

namespace wolffpot {

/// Truncated exponential H_l(r) = e^r - sum_{j<l} r^j / j!.
/// Uses the tail series below r = l and the subtraction form above.
template <typename Scalar>
Scalar H(int l, Scalar r) {
  using std::exp;
  using std::log;
  using std::lgamma;
  if (std::isnan(static_cast<double>(r))) return r;
  if (l <= 0) return exp(r);
  if (r == Scalar(0)) return Scalar(0);
  if (std::isinf(static_cast<double>(r))) return r > 0 ? r : Scalar(0);
  if (r > Scalar(0) && r < Scalar(l)) {
    Scalar term = exp(Scalar(l) * log(r) - lgamma(Scalar(l + 1)));
    Scalar sum = term;
    for (int j = l + 1; j < l + 2000; ++j) {
      term *= r / Scalar(j);
      sum += term;
      if (term <= std::numeric_limits<double>::epsilon() * sum) break;
    }
    return sum;
  }
  const Scalar e = exp(r);
  if (std::isinf(static_cast<double>(e))) return e;
  Scalar partial = Scalar(0);
  Scalar term = Scalar(1);
  for (int j = 0; j < l; ++j) {
    partial += term;
    term *= r / Scalar(j + 1);
  }
  return e - partial;
}

/// Reaction term P(r) = H_l(a r^beta) with l >= 1, a > 0, beta >= 1.
struct ExpNonlinearity {
  int l = 1;
  double a = 1.0;
  double beta = 1.0;

  template <typename Scalar>
  Scalar operator()(Scalar r) const {
    using std::pow;
    if (r <= Scalar(0)) return Scalar(0);
    return H<Scalar>(l, Scalar(a) * pow(r, Scalar(beta)));
  }

  template <typename Scalar>
  Scalar derivative(Scalar r) const {
    using std::pow;
    if (r <= Scalar(0)) return (beta == 1.0 && l == 1) ? Scalar(a) : Scalar(0);
    return Scalar(a * beta) * pow(r, Scalar(beta - 1)) * H<Scalar>(l - 1, Scalar(a) * pow(r, Scalar(beta)));
  }

  ExpNonlinearity with_a(double a_new) const { return {l, a_new, beta}; }
};

template <typename Scalar>
struct SeriesValue {
  Scalar value;
  int terms;
  Scalar tail_bound;
};

namespace detail {

// Sums exp(log_term(q)) for q >= q0 where the ratio of consecutive terms is
// nonincreasing in q. Stops once the geometric tail bound is below rel_tol.
template <typename Scalar, typename LogTerm>
SeriesValue<Scalar> sum_log_series(LogTerm&& log_term, int q0, Scalar rel_tol) {
  using std::exp;
  using std::log;
  using std::log1p;
  int terms = 1;
  Scalar current = log_term(q0);
  Scalar next = log_term(q0 + 1);
  Scalar running_max = current;
  Scalar scaled = Scalar(1);  // sum of exp(logs - running_max)
  Scalar tail_log = -std::numeric_limits<Scalar>::infinity();
  for (int q = q0; q < q0 + 1000000; ++q) {
    const Scalar after = log_term(q + 2);
    const Scalar ratio = exp(after - next);
    if (ratio < Scalar(1)) {
      tail_log = next - log1p(-ratio);
      const Scalar sum_log = running_max + log(scaled);
      if (tail_log - sum_log <= log(rel_tol)) break;
    }
    // Accept term q + 1.
    if (next > running_max) {
      scaled = scaled * exp(running_max - next) + Scalar(1);
      running_max = next;
    } else {
      scaled += exp(next - running_max);
    }
    ++terms;
    next = after;
  }
  const Scalar value = exp(running_max) * scaled;
  return {value, terms, exp(tail_log)};
}

}  // namespace detail

/// Complementary Orlicz pair built from the reaction exponents.
/// For p != 2, Q(s) = sum_{q >= l} s^{bq} / (q^{bq} q!) with b = beta / (p - 1);
/// for p = 2, Q(s) = H_l(s^beta). Q* is the Legendre transform.
/// Q is convex only when l*beta >= p - 1 (leading exponent bl >= 1), which is required.
template <typename Scalar>
class BasicOrliczPair {
 public:
  BasicOrliczPair(Scalar p, int l, Scalar beta) : p_(p), l_(l), beta_(beta) {
    require(p > 1, "orlicz pair: p must exceed 1");
    require(l >= 1, "orlicz pair: l must be >= 1");
    require(beta >= 1, "orlicz pair: beta must be >= 1");
    require(Scalar(l) * beta >= p - 1, "orlicz pair: l*beta >= p-1 is needed for a convex Q");
  }

  Scalar p() const { return p_; }
  int l() const { return l_; }
  Scalar beta() const { return beta_; }
  bool exponential_form() const { return p_ == Scalar(2); }

  SeriesValue<Scalar> Q_series(Scalar s, Scalar rel_tol = Scalar(1e-12)) const {
    using std::log;
    using std::lgamma;
    using std::pow;
    require(s >= 0, "Q: argument must be >= 0");
    if (s == Scalar(0)) return {Scalar(0), 0, Scalar(0)};
    if (exponential_form()) return {H<Scalar>(l_, pow(s, beta_)), 0, Scalar(0)};
    if (std::isinf(static_cast<double>(s))) return {s, 0, Scalar(0)};
    const Scalar b = beta_ / (p_ - 1);
    const Scalar ls = log(s);
    auto log_term = [&](int q) { return b * q * (ls - log(Scalar(q))) - lgamma(Scalar(q + 1)); };
    return detail::sum_log_series<Scalar>(log_term, l_, rel_tol);
  }

  Scalar Q(Scalar s) const { return Q_series(s).value; }

  Scalar Q_prime(Scalar s) const {
    using std::log;
    using std::lgamma;
    using std::pow;
    require(s >= 0, "Q': argument must be >= 0");
    if (exponential_form()) {
      if (s == Scalar(0)) return (beta_ == Scalar(1) && l_ == 1) ? Scalar(1) : Scalar(0);
      return beta_ * pow(s, beta_ - 1) * H<Scalar>(l_ - 1, pow(s, beta_));
    }
    const Scalar b = beta_ / (p_ - 1);
    if (s == Scalar(0)) {
      const Scalar lead = b * l_;
      if (lead > Scalar(1)) return Scalar(0);
      if (lead < Scalar(1)) return std::numeric_limits<Scalar>::infinity();
      return Scalar(1) / (Scalar(l_) * std::exp(lgamma(Scalar(l_ + 1))));
    }
    if (std::isinf(static_cast<double>(s))) return s;
    const Scalar ls = log(s);
    auto log_term = [&](int q) {
      return log(b * q) + (b * q - 1) * ls - b * q * log(Scalar(q)) - lgamma(Scalar(q + 1));
    };
    return detail::sum_log_series<Scalar>(log_term, l_, Scalar(1e-12)).value;
  }

  /// Maximizer of r s - Q(s) over s >= 0 (0 when Q'(0+) >= r).
  Scalar Q_star_argmax(Scalar r) const {
    if (!(r > Q_prime(Scalar(0)))) return Scalar(0);
    Scalar lo = 0, hi = 1;
    while (Q_prime(hi) < r) {
      lo = hi;
      hi *= 2;
      if (hi > Scalar(1e300)) return std::numeric_limits<Scalar>::infinity();
    }
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<Scalar>::epsilon() * hi; ++it) {
      const Scalar mid = (lo + hi) / 2;
      if (Q_prime(mid) < r)
        lo = mid;
      else
        hi = mid;
    }
    return (r * lo - Q(lo) >= r * hi - Q(hi)) ? lo : hi;
  }

  Scalar Q_star(Scalar r) const {
    if (!(r > 0)) return Scalar(0);
    const Scalar s = Q_star_argmax(r);
    if (s == Scalar(0)) return Scalar(0);
    using std::max;
    return max(Scalar(0), r * s - Q(s));
  }

 private:
  Scalar p_;
  int l_;
  Scalar beta_;
};

using OrliczPair = BasicOrliczPair<double>;

}  // namespace wolffpot
