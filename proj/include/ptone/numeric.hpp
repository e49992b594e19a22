#pragma once

#include <cmath>

namespace ptone {

/// phi_p(x) = |x|^{p-2} x.
inline double phi(double x, double p) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), p - 1.0), x);
}

/// Inverse of phi_p: |y|^{1/(p-1)} sign(y).
inline double phi_inv(double y, double p) {
  if (y == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(y), 1.0 / (p - 1.0)), y);
}

}  // namespace ptone
