#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "magobs/basis.hpp"
#include "magobs/fields.hpp"

namespace testsupport {

using magobs::cplx;
using magobs::kPi;
using magobs::kTwoPi;

/// Eighth-order central difference of a scalar function.
inline cplx fd8(const std::function<cplx(double)>& f, double x, double h = 1e-2) {
  static const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  cplx d = 0.0;
  for (int j = 1; j <= 4; ++j) d += c[j - 1] * (f(x + j * h) - f(x - j * h));
  return d / h;
}

/// Gauss-Legendre nodes and weights on [a, b].
inline void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                           std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = 0.5 * (a + b) + 0.5 * (b - a) * t;
    w[static_cast<std::size_t>(i)] = (b - a) / ((1.0 - t * t) * dp * dp);
  }
}

/// Value of a mode vector at z.
inline cplx eval_state(const magobs::ModeVector& u, double x, double y) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < u.basis.size(); ++i) {
    const magobs::Mode k = u.basis.mode(i);
    s += u.coeffs[static_cast<Eigen::Index>(i)] * std::polar(1.0, k.k1 * x + k.k2 * y);
  }
  return s;
}

inline magobs::ModeVector random_state(const magobs::ModeBasis& basis, int radius,
                                       std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  magobs::ModeVector u{basis, magobs::CVector::Zero(static_cast<Eigen::Index>(basis.size()))};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const magobs::Mode k = basis.mode(i);
    if (std::abs(k.k1 - basis.center().k1) <= radius && std::abs(k.k2 - basis.center().k2) <= radius)
      u.coeffs[static_cast<Eigen::Index>(i)] = {n01(rng), n01(rng)};
  }
  u.coeffs /= u.coeffs.norm();
  return u;
}

}  // namespace testsupport
