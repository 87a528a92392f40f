#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "magobs/basis.hpp"
#include "magobs/direction.hpp"

namespace magobs {

/// Trigonometric polynomial on T^2 = R^2/(2 pi Z)^2,
///   f(z) = sum_{|k|_inf <= K} c_k e^{i k.z}.
///
/// Coefficients are stored densely. A field flagged real keeps Hermitian
/// symmetry c_{-k} = conj(c_k); `set` on a real field writes both halves.
class FourierField2D {
 public:
  FourierField2D() : FourierField2D(0, true) {}
  explicit FourierField2D(int bandwidth, bool is_real = true);

  /// Builds a field from sparse (mode, amplitude) records. For real fields
  /// every record must be consistent with Hermitian symmetry; a record whose
  /// partner is missing is completed automatically.
  static FourierField2D from_modes(const std::vector<std::pair<Mode, cplx>>& modes,
                                   bool is_real = true);
  static FourierField2D constant(double c);
  /// amp * cos(k.z + phase)
  static FourierField2D cosine(Mode k, double amp, double phase = 0.0);
  /// amp * sin(k.z)
  static FourierField2D sine(Mode k, double amp);
  /// Random real trig polynomial with i.i.d. normal coefficients of scale
  /// `amp`, zero mean if `zero_mean`.
  static FourierField2D random_real(int bandwidth, std::mt19937_64& rng, double amp = 1.0,
                                    bool zero_mean = false);

  int bandwidth() const { return bandwidth_; }
  bool is_real() const { return real_; }

  cplx coeff(Mode k) const;
  void set(Mode k, cplx c);
  /// Nonzero modes (|c| > tol) in lexicographic order.
  std::vector<std::pair<Mode, cplx>> modes(double tol = 0.0) const;

  cplx value(double x, double y) const;
  double real_value(double x, double y) const { return value(x, y).real(); }
  cplx mean() const { return coeff({0, 0}); }

  FourierField2D dx() const;
  FourierField2D dy() const;
  /// Smallest bandwidth holding every coefficient above tol.
  FourierField2D trimmed(double tol = 0.0) const;
  bool is_constant(double tol = 1e-12) const;
  /// True when every mode with k1 != 0 is below tol.
  bool is_x_independent(double tol = 1e-12) const;
  double max_abs_coeff() const;

  FourierField2D& operator+=(const FourierField2D& o);
  FourierField2D& operator-=(const FourierField2D& o);
  FourierField2D& operator*=(double s);
  friend FourierField2D operator+(FourierField2D a, const FourierField2D& b) { return a += b; }
  friend FourierField2D operator-(FourierField2D a, const FourierField2D& b) { return a -= b; }
  friend FourierField2D operator*(double s, FourierField2D a) { return a *= s; }
  /// Pointwise product (exact coefficient convolution).
  friend FourierField2D operator*(const FourierField2D& a, const FourierField2D& b);

 private:
  std::size_t slot(Mode k) const {
    return static_cast<std::size_t>((k.k1 + bandwidth_) * (2 * bandwidth_ + 1) +
                                    (k.k2 + bandwidth_));
  }
  bool in_range(Mode k) const;
  FourierField2D widened(int bandwidth) const;

  int bandwidth_;
  bool real_;
  std::vector<cplx> coeffs_;
};

/// Real vector potential A = (A1, A2).
struct VectorPotential {
  FourierField2D a1;
  FourierField2D a2;

  int bandwidth() const { return std::max(a1.bandwidth(), a2.bandwidth()); }
  /// |A|^2 as an exact trig polynomial.
  FourierField2D squared_norm() const { return a1 * a1 + a2 * a2; }
  bool is_y_only(double tol = 1e-12) const {
    return a1.is_x_independent(tol) && a2.is_x_independent(tol);
  }
};

VectorPotential operator+(const VectorPotential& a, const VectorPotential& b);
/// grad g as a vector potential.
VectorPotential gradient(const FourierField2D& g);

/// Trigonometric polynomial on a circle of circumference ell,
///   f(s) = sum_{|m| <= M} c_m e^{i m (2 pi / ell) s}.
class CircleFunction {
 public:
  CircleFunction() : CircleFunction(kTwoPi, 0, true) {}
  CircleFunction(double ell, int max_mode, bool is_real = true);
  CircleFunction(double ell, std::vector<cplx> coeffs, bool is_real = true);

  static CircleFunction from_modes(double ell, const std::vector<std::pair<int, cplx>>& modes,
                                   bool is_real = true);

  double circumference() const { return ell_; }
  double frequency() const { return kTwoPi / ell_; }
  int max_mode() const { return max_mode_; }
  bool is_real() const { return real_; }

  cplx coeff(int m) const;
  void set(int m, cplx c);
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  cplx value(double s) const;
  double real_value(double s) const { return value(s).real(); }
  CircleFunction derivative(int order = 1) const;
  /// All |c_m| (m != 0) below tol.
  bool is_constant(double tol = 1e-12) const;
  double max_abs_coeff() const;

  CircleFunction& operator+=(const CircleFunction& o);
  CircleFunction& operator*=(double s);
  friend CircleFunction operator+(CircleFunction a, const CircleFunction& b) { return a += b; }
  friend CircleFunction operator*(double s, CircleFunction a) { return a *= s; }
  friend CircleFunction operator*(const CircleFunction& a, const CircleFunction& b);

 private:
  std::size_t slot(int m) const { return static_cast<std::size_t>(m + max_mode_); }

  double ell_;
  int max_mode_;
  bool real_;
  std::vector<cplx> coeffs_;
};

struct CriticalPoint {
  double position = 0.0;
  double second_derivative = 0.0;
  bool degenerate = false;
};

/// Result of critical_points: either an explicit finite list, or the
/// "every point is critical" state of a constant function.
struct CriticalPointSet {
  bool all_critical = false;
  std::vector<CriticalPoint> points;
};

/// Long-time average along dir: keeps exactly the modes orthogonal to the
/// direction, k = m(-q, p).
FourierField2D directional_average(const FourierField2D& f, const Direction& dir);

/// The averaged field restricted to the transversal coordinate s = z.gamma_perp,
/// a function on the circle of circumference 2 pi / |(p,q)|.
CircleFunction transversal_profile(const FourierField2D& f, const Direction& dir);

/// A_gamma = <A>_gamma . gamma as a function of the transversal coordinate.
CircleFunction a_gamma(const VectorPotential& a, const Direction& dir);

/// B = d_x A2 - d_y A1.
FourierField2D magnetic_field(const VectorPotential& a);

/// <B>_gamma on the transversal circle; equals -d/ds A_gamma.
CircleFunction b_gamma_average(const VectorPotential& a, const Direction& dir);

/// First gauge function
///   g1(x,y) = \int_{-pi}^x (<A1>(y) - A1(s,y)) ds,
/// so that A1 + d_x g1 = <A1>(y), the x-average of A1.
FourierField2D gauge_g1(const VectorPotential& a);

/// A + grad g1: the gauged potential whose first component depends on y only.
VectorPotential first_averaging(const VectorPotential& a);

/// Zero-x-mean antiderivative in x: modes c_k/(i k1) for k1 != 0; the k1 = 0
/// modes of the input must vanish (up to tol).
FourierField2D x_antiderivative(const FourierField2D& f, double tol = 1e-12);

/// y-profile of an x-independent field as a circle function on [0, 2 pi).
CircleFunction y_profile(const FourierField2D& f, double tol = 1e-12);
/// Inverse of y_profile.
FourierField2D field_from_y_profile(const CircleFunction& f);

/// Fourier coefficients of e^{sign i g} * state, computed on an oversampled
/// grid (at least 4 (N + K_g) points per axis) and projected back onto the
/// state's basis. Throws TruncationError when the state has mass within
/// bandwidth(g) modes of the basis edge.
ModeVector apply_gauge(const ModeVector& state, const FourierField2D& g, int sign,
                       double support_tol = 1e-14);

/// Critical points of a real circle function: unit-circle roots of the
/// companion matrix of f', Newton-polished and classified by f''.
CriticalPointSet critical_points(const CircleFunction& f, double degeneracy_tol = 1e-8);

}  // namespace magobs
