#pragma once

#include <cmath>
#include <string>

#include "magobs/basis.hpp"

namespace magobs {

/// Primitive rational direction (p, q) on the torus, gcd(|p|,|q|) = 1.
///
/// Canonical sign: p > 0, or (p, q) = (0, 1). The unit direction is
/// gamma = (p, q)/r and the transversal unit vector gamma_perp = (-q, p)/r
/// with r = sqrt(p^2 + q^2). The transversal coordinate of a point z is
/// s = z . gamma_perp, defined modulo the projection circumference 2 pi / r.
class Direction {
 public:
  /// Validates primitivity and canonicalizes the sign; (p,q) and (-p,-q)
  /// describe the same family of closed geodesics.
  static Direction make(int p, int q);

  int p() const { return p_; }
  int q() const { return q_; }
  double length() const { return std::sqrt(double(p_) * p_ + double(q_) * q_); }
  /// Circumference of the transversal circle.
  double circumference() const { return kTwoPi / length(); }
  /// Lattice generator orthogonal to the direction: (-q, p).
  Mode orthogonal_mode() const { return {-q_, p_}; }
  /// max(|p|, |q|), the index used by the direction cutoff.
  int height() const;
  double transversal(double x, double y) const { return (-q_ * x + p_ * y) / length(); }

  std::string str() const;

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  Direction(int p, int q) : p_(p), q_(q) {}
  int p_;
  int q_;
};

}  // namespace magobs
