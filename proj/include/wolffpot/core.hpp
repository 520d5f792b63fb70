#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wolffpot {

using Point = Eigen::VectorXd;
using Field = Eigen::ArrayXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown for malformed inputs (dimension mismatch, negative mass, bad ranges).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a problem violates a solvability hypothesis.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Volume of the unit ball in R^n.
template <typename Scalar = double>
Scalar unit_ball_volume(int n) {
  using std::pow;
  using std::tgamma;
  const Scalar pi = Scalar(EIGEN_PI);
  return pow(pi, Scalar(n) / 2) / tgamma(Scalar(n) / 2 + 1);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace wolffpot
