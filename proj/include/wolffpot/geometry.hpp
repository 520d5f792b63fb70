#pragma once

#include "wolffpot/core.hpp"

namespace wolffpot {

/// Integral of sin^n over [0, psi].
double sin_power_integral(int n, double psi);

/// Volume of a cap of height H cut from a ball of radius R in R^n.
double cap_volume(int n, double R, double H);

/// |B_t(x) ∩ B_r(c)| in R^n where d = |x - c|.
double ball_ball_volume(int n, double d, double t, double r);

/// |B_t(x) ∩ [lo, hi]| for an axis-aligned box.
double ball_box_volume(const Point& x, double t, const Point& lo, const Point& hi,
                       double rel_tol = 1e-11);

/// Radii at which t -> |B_t(x) ∩ box| changes regime (faces, edges, corners).
std::vector<double> ball_box_kinks(const Point& x, const Point& lo, const Point& hi);

}  // namespace wolffpot
