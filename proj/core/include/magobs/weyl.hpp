#pragma once

#include <functional>
#include <string>
#include <vector>

#include "magobs/basis.hpp"
#include "magobs/fields.hpp"

namespace magobs {

/// A function of the momentum variable zeta = (xi, eta).
struct Profile {
  std::function<cplx(double, double)> fn;
  /// Polynomial degree in zeta, or -1 when the profile is not polynomial.
  int degree = -1;
  bool compact_support = false;

  cplx operator()(double xi, double eta) const { return fn(xi, eta); }

  static Profile constant(cplx c);
  /// xi^a eta^b
  static Profile monomial(int a, int b);
};

/// Symbol on T^2 x R^2 written as a finite Fourier series in z,
///   a(z, zeta) = sum_m a_m(zeta) e^{i m.z}.
class Symbol {
 public:
  struct Term {
    Mode m;
    Profile profile;
  };

  Symbol() = default;

  /// f(z), independent of zeta.
  static Symbol from_field(const FourierField2D& f);
  /// p(zeta), independent of z.
  static Symbol momentum(Profile p);
  /// f(z) p(zeta).
  static Symbol product(const FourierField2D& f, const Profile& p);

  void add_term(Mode m, Profile p);
  const std::vector<Term>& terms() const { return terms_; }
  int z_bandwidth() const;
  /// Highest declared polynomial degree, -1 if any term is not polynomial.
  int degree() const;

  cplx value(double x, double y, double xi, double eta) const;

  Symbol& operator+=(const Symbol& o);
  friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
  friend Symbol operator*(cplx s, const Symbol& a);

 private:
  std::vector<Term> terms_;
};

/// v(zeta) . grad_z a, for a vector field v = (v1, v2) in zeta.
Symbol transport(const Symbol& a, const std::function<cplx(double, double)>& v1,
                 const std::function<cplx(double, double)>& v2, int degree_increase);

/// Weyl quantization on the mode basis:
///   M[k'+m, k'] = a_m(h (k' + m/2)).
/// Couplings leaving the basis are dropped.
CMatrix quantize(const Symbol& a, double h, const ModeBasis& basis);

/// Op_h^w(a) state without forming the matrix.
CVector apply_symbol(const Symbol& a, double h, const ModeBasis& basis, const CVector& state);

CMatrix commutator(const CMatrix& a, const CMatrix& b);
/// [A, diag(d)] in O(n^2).
CMatrix commutator_with_diagonal(const CMatrix& a, const CVector& d);

/// e^G H e^{-G}.
CMatrix conjugate_exp(const CMatrix& g, const CMatrix& h);

struct WignerSample {
  std::string symbol;
  double h = 0.0;
  cplx value;
};

/// <Op_h^w(a) state, state>.
WignerSample wigner_eval(const ModeVector& state, const Symbol& a, double h,
                         const std::string& label = "");

/// exp(1 - 1/(1 - t^2)) on |t| < 1, zero elsewhere.
double bump(double t);
/// Smooth cutoff equal to 1 on |t| <= inner and 0 on |t| >= outer. The
/// transition is the C-infinity step assembled from exp(-1/u), the same
/// building block as `bump`.
double plateau(double t, double inner, double outer);

/// Second-normal-form parameters.
struct NormalFormSpec {
  double h = 1.0 / 32.0;
  double rho = 0.3;
  double alpha = 0.3;
  /// 1 on |xi +- 1| <= 1/16, supported in |xi +- 1| <= 1/8.
  std::function<double(double)> psi = [](double xi) {
    return plateau(std::abs(xi) - 1.0, 1.0 / 16.0, 1.0 / 8.0);
  };
  /// 1 on |eta| <= 1, supported in |eta| <= 2.
  std::function<double(double)> theta = [](double eta) { return plateau(eta, 1.0, 2.0); };
};

/// True when psi and theta have the declared supports and plateaus on a
/// sample grid.
bool validate_cutoffs(const NormalFormSpec& spec, int samples = 4001);

struct RemainderRecord {
  double h = 0.0;
  double alpha = 0.0;
  /// max over test packets of ||(E - P2) v|| / ||v||.
  double remainder_norm = 0.0;
  double g2_norm = 0.0;
  std::size_t basis_size = 0;
};

/// G2 = Op_h^w(i psi(xi)/xi F(x,y) theta(eta) eta), F the zero-mean x
/// antiderivative of <A2> - A2. A must already satisfy A1 = A1(y).
Symbol normal_form_symbol(const VectorPotential& a, const NormalFormSpec& spec);

struct NormalFormResult {
  CMatrix g2;
  RemainderRecord record;
};

/// Builds G2, E = e^{G2} (P1 + Q1) e^{-G2} with P1 + Q1 = h^2 H_{A,V}, and
/// measures E - P2 on Gaussian packets near (xi, eta) = (1, 0) of widths
/// h^(alpha-1)/3 (y) and 1/(48 h) (x) in mode units.
NormalFormResult normal_form_g2(const VectorPotential& a, const FourierField2D& v,
                                const NormalFormSpec& spec, const ModeBasis& basis);

/// Frequency-localized basis for the scan: centred at (round(1/h), 0),
/// x half-width n1, y half-width max(n2, 5 sigma_y + 2 K) with K the field
/// bandwidth.
ModeBasis normal_form_basis(double h, double alpha, int n1, int n2, int field_bandwidth);

struct RemainderScan {
  std::vector<RemainderRecord> records;
  double slope = 0.0;
};

RemainderScan remainder_scan(const VectorPotential& a, const FourierField2D& v,
                             const std::vector<double>& h_list, double alpha, int n1, int n2);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace magobs
