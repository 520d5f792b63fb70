#pragma once

#include <array>
#include <cmath>

namespace wolffpot {

/// One 15-point Gauss-Kronrod panel. err receives |K15 - G7|.
template <typename Scalar, typename F>
Scalar gauss_kronrod15(F&& f, Scalar a, Scalar b, Scalar& err) {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const Scalar center = (a + b) / 2;
  const Scalar half = (b - a) / 2;
  const Scalar fc = f(center);
  Scalar kronrod = fc * Scalar(wgk[7]);
  Scalar gauss = fc * Scalar(wg[3]);
  for (int j = 0; j < 7; ++j) {
    const Scalar dx = half * Scalar(xgk[j]);
    const Scalar sum = f(center - dx) + f(center + dx);
    kronrod += Scalar(wgk[j]) * sum;
    if (j % 2 == 1) gauss += Scalar(wg[j / 2]) * sum;
  }
  using std::abs;
  err = abs((kronrod - gauss) * half);
  return kronrod * half;
}

namespace detail {
template <typename Scalar, typename F>
Scalar integrate_recursive(F& f, Scalar a, Scalar b, Scalar whole, Scalar whole_err,
                           Scalar target, int depth) {
  if (whole_err <= target || depth <= 0 || !(b - a > 0)) return whole;
  const Scalar mid = (a + b) / 2;
  Scalar el, er;
  const Scalar left = gauss_kronrod15<Scalar>(f, a, mid, el);
  const Scalar right = gauss_kronrod15<Scalar>(f, mid, b, er);
  using std::sqrt;
  const Scalar sub = target / Scalar(sqrt(2.0));
  return integrate_recursive<Scalar>(f, a, mid, left, el, sub, depth - 1) +
         integrate_recursive<Scalar>(f, mid, b, right, er, sub, depth - 1);
}
}  // namespace detail

/// Adaptive Gauss-Kronrod quadrature of f over [a, b].
/// Stops when the panel error drops below max(abs_tol, rel_tol * |I|).
template <typename Scalar, typename F>
Scalar integrate(F&& f, Scalar a, Scalar b, Scalar rel_tol, Scalar abs_tol = Scalar(0),
                 int max_depth = 40) {
  if (!(b > a)) return Scalar(0);
  Scalar err;
  const Scalar whole = gauss_kronrod15<Scalar>(f, a, b, err);
  using std::abs;
  using std::max;
  const Scalar target = max(abs_tol, rel_tol * abs(whole));
  return detail::integrate_recursive<Scalar>(f, a, b, whole, err, target, max_depth);
}

}  // namespace wolffpot
