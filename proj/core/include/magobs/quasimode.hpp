#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "magobs/fields.hpp"
#include "magobs/geometry.hpp"

namespace magobs {

/// Coefficients over the normalized oscillator eigenfunctions
///   phi_j(y) = c_j H_j(sqrt(beta/hbar) y) exp(-beta y^2 / (2 hbar)),
/// eigenfunctions of L = -hbar^2 d^2 + beta^2 y^2 - beta hbar with
/// eigenvalue 2 j beta hbar.
class HermiteVector {
 public:
  HermiteVector(double beta, double hbar, std::vector<cplx> coeffs = {});
  /// phi_j
  static HermiteVector unit(double beta, double hbar, int j);

  double beta() const { return beta_; }
  double hbar() const { return hbar_; }
  const std::vector<cplx>& coeffs() const { return c_; }
  /// Highest level with a stored coefficient.
  int max_level() const { return static_cast<int>(c_.size()) - 1; }
  cplx coeff(int j) const { return j >= 0 && j <= max_level() ? c_[static_cast<std::size_t>(j)] : cplx{}; }
  double norm() const;

  HermiteVector& operator+=(const HermiteVector& o);
  friend HermiteVector operator+(HermiteVector a, const HermiteVector& b) { return a += b; }
  friend HermiteVector operator*(cplx s, HermiteVector a);

  /// Value at y.
  cplx value(double y) const;

 private:
  void check_compatible(const HermiteVector& o) const;

  double beta_;
  double hbar_;
  std::vector<cplx> c_;
};

/// y phi_j = sqrt(hbar/(2 beta)) (sqrt(j) phi_{j-1} + sqrt(j+1) phi_{j+1})
HermiteVector mul_y(const HermiteVector& v);
/// d/dy phi_j = sqrt(beta/(2 hbar)) (sqrt(j) phi_{j-1} - sqrt(j+1) phi_{j+1})
HermiteVector d_dy(const HermiteVector& v);
/// L^{-1} on E_1 + E_2 + ...; the E_0 coefficient must vanish to `tol`
/// relative to the vector norm.
HermiteVector apply_L_inverse(const HermiteVector& v, double tol = 1e-12);
cplx project_E0(const HermiteVector& v);

/// phi_0 .. phi_jmax at y, by the stable three-term recurrence.
std::vector<double> hermite_functions(double beta, double hbar, int jmax, double y);

/// Local data of A1, A2, W at a non-degenerate critical point y* of A1,
/// after translating y* to 0 (and negating A1 at a minimum).
struct QuasimodeParams {
  double beta = 1.0;
  double a1_0 = 0.0;
  /// Taylor coefficients of A1 (index = order); r1[2] = -beta^2 / 2.
  std::array<double, 5> r1{};
  /// Taylor coefficients of A2 through order 4.
  std::array<double, 5> r2{};
  /// W(0), W = |A|^2 + V.
  double w0 = 0.0;
  double b = 1.0;
  double y_star = 0.0;
  /// +1 at a maximum of A1; -1 at a minimum, where the x-frequency is negated.
  int sign = 1;
  /// Translated (and sign-adjusted) profiles, used by residual evaluation.
  CircleFunction a1;
  CircleFunction a2;
  CircleFunction w;
};

QuasimodeParams extract_params(const CircleFunction& a1, const CircleFunction& a2,
                               const CircleFunction& w, double y_star, double b,
                               double degeneracy_tol = 1e-8);
/// W = A1^2 + A2^2 + V computed from the profiles.
QuasimodeParams extract_params_from_fields(const CircleFunction& a1, const CircleFunction& a2,
                                           const CircleFunction& v, double y_star, double b);

struct WkbSolution {
  double hbar = 0.0;
  HermiteVector v0;
  HermiteVector v1;
  HermiteVector v2;
  /// v1 = hbar^{1/2} sum beta1[j] phi_j, j = 0..3.
  std::vector<cplx> beta1;
  /// v2 = hbar sum beta2[j] phi_j, j = 0..6.
  std::vector<cplx> beta2;
  cplx c0;
  cplx lambda0;

  HermiteVector total() const { return v0 + v1 + v2; }
};

/// Two-step WKB solve for
///   P = -hbar^2 d^2 - 2 A1 + i hbar^2 (A2 d + d A2) + hbar^2 W,
///   P v = (beta hbar - 2 A1(0) + Lambda0 hbar^2) v + O(hbar^{5/2}).
/// With L = -hbar^2 d^2 + beta^2 y^2 - beta hbar:
///   L v1 = 2 r3 y^3 phi0 - 2 i hbar^2 a2_0 d phi0,
///   L v2 = 2 r3 y^3 v1 - 2 i hbar^2 a2_0 d v1 + 2 r4 y^4 phi0
///          - i hbar^2 a2_1 (2 y d + 1) phi0 - hbar^2 (w0 - Lambda0) phi0,
/// with Lambda0 = w0 - c0 fixed by solvability on E_0.
WkbSolution build_wkb(const QuasimodeParams& params, double hbar);

/// Evaluable profiles for the one-dimensional operator.
struct OperatorProfiles {
  std::function<double(double)> a1;
  std::function<double(double)> a2;
  std::function<double(double)> da2;
  std::function<double(double)> w;
  double a1_0 = 0.0;
};
OperatorProfiles profiles_from(const QuasimodeParams& params);

/// Smooth cutoff: 1 on |y| <= b, zero for |y| >= min(2b, pi - 0.1).
double quasimode_cutoff(double y, double b);

struct ResidualRecord {
  double hbar = 0.0;
  double residual_l2 = 0.0;
  /// ||v||_{L^2(b < |y| < pi)}
  double exterior_mass = 0.0;
  /// | ||v|| - 1 |
  double norm_deviation = 0.0;
  /// ||hbar d v||
  double dy_norm = 0.0;
};

struct ResidualScan {
  std::vector<ResidualRecord> records;
  double slope = 0.0;
};

/// Residual of the cut-off quasimode under the full operator on a periodic
/// grid of `grid` points over [-pi, pi), derivatives spectral.
ResidualRecord residual(const QuasimodeParams& params, const OperatorProfiles& ops, double hbar,
                        int grid = 4096);
ResidualScan residual_scan(const QuasimodeParams& params, const std::vector<double>& hbar_list,
                           int grid = 4096);

/// Periodic samples of the cut-off quasimode at y_j = -pi + 2 pi j / n,
/// translated back to y* (y -> y - y*).
std::vector<cplx> sample_quasimode(const WkbSolution& wkb, const QuasimodeParams& params, int n);

struct WitnessInput {
  VectorPotential a;
  FourierField2D v;
  Region region;
  std::vector<int> k_list;
  double t = 1.0;
  double y_star = 0.0;
  double b = 1.0;
  /// y half-width of the separable basis.
  int m = 48;
  /// Times at which the exterior fraction is sampled.
  int samples = 21;
};

struct WitnessRecord {
  int k = 0;
  double hbar = 0.0;
  /// \int_0^T <M_omega u, u> dt / ||u(0)||^2
  double mass_ratio = 0.0;
  /// max over sampled t of ||u(t)||_{|y - y*| > b} / ||u(t)||
  double exterior_fraction = 0.0;
};

/// Evolves the quasimode e^{ikx} v_hbar(y) under the separable block H_k and
/// records the observed mass on the region.
std::vector<WitnessRecord> witness_experiment(const WitnessInput& in);

}  // namespace magobs
