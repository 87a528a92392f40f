#include "magobs/quasimode.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "magobs/errors.hpp"
#include "magobs/linalg.hpp"
#include "magobs/obs.hpp"
#include "magobs/parallel.hpp"
#include "magobs/spectral.hpp"
#include "magobs/weyl.hpp"

namespace magobs {

// ---------------------------------------------------------------- HermiteVector

HermiteVector::HermiteVector(double beta, double hbar, std::vector<cplx> coeffs)
    : beta_(beta), hbar_(hbar), c_(std::move(coeffs)) {
  if (!(beta > 0.0) || !(hbar > 0.0))
    throw InvalidInput("HermiteVector: beta and hbar must be positive");
}

HermiteVector HermiteVector::unit(double beta, double hbar, int j) {
  if (j < 0) throw InvalidInput("HermiteVector::unit: negative level");
  std::vector<cplx> c(static_cast<std::size_t>(j + 1));
  c.back() = 1.0;
  return {beta, hbar, std::move(c)};
}

double HermiteVector::norm() const {
  double s = 0.0;
  for (const auto& c : c_) s += std::norm(c);
  return std::sqrt(s);
}

void HermiteVector::check_compatible(const HermiteVector& o) const {
  if (beta_ != o.beta_ || hbar_ != o.hbar_)
    throw InvalidInput("HermiteVector: mismatched beta or hbar");
}

HermiteVector& HermiteVector::operator+=(const HermiteVector& o) {
  check_compatible(o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
  return *this;
}

HermiteVector operator*(cplx s, HermiteVector a) {
  for (auto& c : a.c_) c *= s;
  return a;
}

std::vector<double> hermite_functions(double beta, double hbar, int jmax, double y) {
  std::vector<double> out(static_cast<std::size_t>(jmax + 1));
  const double u = std::sqrt(beta / hbar) * y;
  out[0] = std::pow(beta / (kPi * hbar), 0.25) * std::exp(-0.5 * u * u);
  if (jmax >= 1) out[1] = std::sqrt(2.0) * u * out[0];
  for (int j = 1; j < jmax; ++j) {
    out[static_cast<std::size_t>(j + 1)] =
        std::sqrt(2.0 / (j + 1)) * u * out[static_cast<std::size_t>(j)] -
        std::sqrt(double(j) / (j + 1)) * out[static_cast<std::size_t>(j - 1)];
  }
  return out;
}

cplx HermiteVector::value(double y) const {
  if (c_.empty()) return {};
  const auto phi = hermite_functions(beta_, hbar_, max_level(), y);
  cplx s{};
  for (std::size_t j = 0; j < c_.size(); ++j) s += c_[j] * phi[j];
  return s;
}

namespace {

// a_{j-1} phi_{j-1} + b_{j+1} phi_{j+1} ladder with sign `down_sign` on the
// lowering part.
HermiteVector ladder(const HermiteVector& v, double scale, double lower_sign, double raise_sign) {
  std::vector<cplx> out(v.coeffs().size() + 1);
  for (int j = 0; j <= v.max_level(); ++j) {
    const cplx c = v.coeff(j);
    if (c == cplx{}) continue;
    if (j > 0) out[static_cast<std::size_t>(j - 1)] += lower_sign * scale * std::sqrt(double(j)) * c;
    out[static_cast<std::size_t>(j + 1)] += raise_sign * scale * std::sqrt(double(j + 1)) * c;
  }
  return {v.beta(), v.hbar(), std::move(out)};
}

}  // namespace

HermiteVector mul_y(const HermiteVector& v) {
  return ladder(v, std::sqrt(v.hbar() / (2.0 * v.beta())), 1.0, 1.0);
}

HermiteVector d_dy(const HermiteVector& v) {
  return ladder(v, std::sqrt(v.beta() / (2.0 * v.hbar())), 1.0, -1.0);
}

HermiteVector apply_L_inverse(const HermiteVector& v, double tol) {
  if (std::abs(v.coeff(0)) > tol * std::max(1.0, v.norm()))
    throw InvalidInput("apply_L_inverse: input has a nonzero E_0 component");
  std::vector<cplx> out(v.coeffs().size());
  for (int j = 1; j <= v.max_level(); ++j)
    out[static_cast<std::size_t>(j)] = v.coeff(j) / (2.0 * j * v.beta() * v.hbar());
  return {v.beta(), v.hbar(), std::move(out)};
}

cplx project_E0(const HermiteVector& v) { return v.coeff(0); }

// ---------------------------------------------------------------- parameters

namespace {

CircleFunction translated(const CircleFunction& f, double y_star, double sign) {
  CircleFunction g(kTwoPi, f.max_mode(), f.is_real());
  for (int m = -f.max_mode(); m <= f.max_mode(); ++m) {
    if (f.is_real() && m < 0) continue;
    g.set(m, sign * f.coeff(m) * std::polar(1.0, m * y_star));
  }
  return g;
}

double taylor(const CircleFunction& f, int order) {
  cplx s{};
  for (int m = -f.max_mode(); m <= f.max_mode(); ++m) s += std::pow(kI * double(m), order) * f.coeff(m);
  double fact = 1.0;
  for (int i = 2; i <= order; ++i) fact *= i;
  return s.real() / fact;
}

}  // namespace

QuasimodeParams extract_params(const CircleFunction& a1, const CircleFunction& a2,
                               const CircleFunction& w, double y_star, double b,
                               double degeneracy_tol) {
  for (const auto* f : {&a1, &a2, &w}) {
    if (std::abs(f->circumference() - kTwoPi) > 1e-12 || !f->is_real())
      throw InvalidInput("extract_params: profiles must be real functions of y on [0, 2pi)");
  }
  if (!(b > 0.0 && b < kPi)) throw InvalidInput("extract_params: cutoff b must lie in (0, pi)");
  const CircleFunction probe = translated(a1, y_star, 1.0);
  const double d1 = taylor(probe, 1);
  const double d2 = 2.0 * taylor(probe, 2);
  if (std::abs(d1) > 1e-10 * std::max(1.0, a1.max_abs_coeff()))
    throw InvalidInput("extract_params: y* is not a critical point of A1");
  if (std::abs(d2) < degeneracy_tol)
    throw InvalidInput("extract_params: degenerate critical point");

  QuasimodeParams p;
  p.sign = d2 < 0.0 ? 1 : -1;
  p.y_star = y_star;
  p.b = b;
  p.a1 = translated(a1, y_star, p.sign);
  p.a2 = translated(a2, y_star, 1.0);
  p.w = translated(w, y_star, 1.0);
  for (int j = 0; j <= 4; ++j) {
    p.r1[static_cast<std::size_t>(j)] = taylor(p.a1, j);
    p.r2[static_cast<std::size_t>(j)] = taylor(p.a2, j);
  }
  p.a1_0 = p.r1[0];
  p.beta = std::sqrt(-2.0 * p.r1[2]);
  p.w0 = p.w.real_value(0.0);
  return p;
}

QuasimodeParams extract_params_from_fields(const CircleFunction& a1, const CircleFunction& a2,
                                           const CircleFunction& v, double y_star, double b) {
  return extract_params(a1, a2, a1 * a1 + a2 * a2 + v, y_star, b);
}

// ---------------------------------------------------------------- WKB

WkbSolution build_wkb(const QuasimodeParams& params, double hbar) {
  if (!(hbar > 0.0 && hbar < 1.0)) throw InvalidInput("build_wkb: hbar must lie in (0, 1)");
  const double beta = params.beta;
  const double h2 = hbar * hbar;
  const double r3 = params.r1[3];
  const double r4 = params.r1[4];
  const double s0 = params.r2[0];
  const double s1 = params.r2[1];

  const HermiteVector phi0 = HermiteVector::unit(beta, hbar, 0);
  auto y3 = [](const HermiteVector& v) { return mul_y(mul_y(mul_y(v))); };

  // The first-order right-hand side is odd, so its E_0 part is exactly zero.
  const HermiteVector rhs1 = cplx(2.0 * r3) * y3(phi0) + cplx(-2.0 * kI * h2 * s0) * d_dy(phi0);
  const HermiteVector v1 = apply_L_inverse(rhs1);

  const HermiteVector t = cplx(2.0 * r3) * y3(v1) + cplx(-2.0 * kI * h2 * s0) * d_dy(v1) +
                          cplx(2.0 * r4) * mul_y(y3(phi0));
  const cplx c0 = project_E0(t) / h2;
  const cplx lambda0 = params.w0 - c0;

  // (2 y d + 1) phi0 has no E_0 part; lambda0 removes the rest.
  HermiteVector rhs2 = t + cplx(-kI * h2 * s1) * (cplx(2.0) * mul_y(d_dy(phi0)) + phi0) +
                       (h2 * (lambda0 - params.w0)) * phi0;
  std::vector<cplx> c = rhs2.coeffs();
  const double scale = std::max(std::abs(c[0]), rhs2.norm());
  if (std::abs(c[0]) > 1e-10 * std::max(scale, h2))
    throw NumericalError("build_wkb: second-order solvability failed");
  c[0] = 0.0;
  const HermiteVector v2 = apply_L_inverse(HermiteVector(beta, hbar, std::move(c)));

  WkbSolution sol{hbar, phi0, v1, v2, {}, {}, c0, lambda0};
  for (int j = 0; j <= 3; ++j) sol.beta1.push_back(v1.coeff(j) / std::sqrt(hbar));
  for (int j = 0; j <= 6; ++j) sol.beta2.push_back(v2.coeff(j) / hbar);
  return sol;
}

OperatorProfiles profiles_from(const QuasimodeParams& params) {
  const CircleFunction a1 = params.a1;
  const CircleFunction a2 = params.a2;
  const CircleFunction da2 = params.a2.derivative(1);
  const CircleFunction w = params.w;
  return {[a1](double y) { return a1.real_value(y); },
          [a2](double y) { return a2.real_value(y); },
          [da2](double y) { return da2.real_value(y); },
          [w](double y) { return w.real_value(y); },
          params.a1_0};
}

double quasimode_cutoff(double y, double b) {
  return plateau(y, b, std::min(2.0 * b, kPi - 0.1));
}

ResidualRecord residual(const QuasimodeParams& params, const OperatorProfiles& ops, double hbar,
                        int grid) {
  const double dy = kTwoPi / grid;
  const double width = std::sqrt(hbar / params.beta);
  if (width / dy < 16.0)
    throw NumericalError("residual: fewer than 16 grid points per oscillator width");
  const WkbSolution wkb = build_wkb(params, hbar);
  const HermiteVector v = wkb.total();

  detail::Fft1D u(grid);
  std::vector<double> ys(static_cast<std::size_t>(grid));
  double exterior = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double y = -kPi + j * dy;
    ys[static_cast<std::size_t>(j)] = y;
    const cplx val = v.value(y);
    if (std::abs(y) > params.b) exterior += std::norm(val) * dy;
    u.data()[static_cast<std::size_t>(j)] = quasimode_cutoff(y, params.b) * val;
  }
  const std::vector<cplx> samples(u.data().begin(), u.data().end());

  // Spectral first and second derivatives on the periodic grid.
  u.to_coeffs();
  const std::vector<cplx> c(u.data().begin(), u.data().end());
  detail::Fft1D d1(grid);
  detail::Fft1D d2(grid);
  for (int j = 0; j < grid; ++j) {
    int m = j <= grid / 2 ? j : j - grid;
    if (2 * j == grid) m = 0;
    // Grid starts at -pi: the coefficient of e^{imy} carries (-1)^m, which
    // cancels between the two transforms.
    d1.data()[static_cast<std::size_t>(j)] = kI * double(m) * c[static_cast<std::size_t>(j)];
    d2.data()[static_cast<std::size_t>(j)] = -double(m) * m * c[static_cast<std::size_t>(j)];
  }
  d1.to_grid();
  d2.to_grid();

  const cplx e = params.beta * hbar - 2.0 * ops.a1_0 + wkb.lambda0 * hbar * hbar;
  const double h2 = hbar * hbar;
  double res = 0.0;
  for (int j = 0; j < grid; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const double y = ys[sj];
    const cplx f = samples[sj];
    const cplx pf = -h2 * d2.data()[sj] - 2.0 * ops.a1(y) * f +
                    kI * h2 * (2.0 * ops.a2(y) * d1.data()[sj] + ops.da2(y) * f) + h2 * ops.w(y) * f;
    res += std::norm(pf - e * f) * dy;
  }

  ResidualRecord r;
  r.hbar = hbar;
  r.residual_l2 = std::sqrt(res);
  r.exterior_mass = std::sqrt(exterior);
  r.norm_deviation = std::abs(v.norm() - 1.0);
  r.dy_norm = hbar * d_dy(v).norm();
  return r;
}

ResidualScan residual_scan(const QuasimodeParams& params, const std::vector<double>& hbar_list,
                           int grid) {
  if (hbar_list.size() < 4) throw InvalidInput("residual_scan: need at least four hbar values");
  for (std::size_t i = 1; i < hbar_list.size(); ++i)
    if (!(hbar_list[i] < hbar_list[i - 1]))
      throw InvalidInput("residual_scan: hbar values must decrease");
  const OperatorProfiles ops = profiles_from(params);
  ResidualScan scan;
  scan.records.resize(hbar_list.size());
  parallel_for(hbar_list.size(), [&](std::size_t i) {
    scan.records[i] = residual(params, ops, hbar_list[i], grid);
  });
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : scan.records) {
    xs.push_back(r.hbar);
    ys.push_back(r.residual_l2);
  }
  scan.slope = loglog_slope(xs, ys);
  return scan;
}

std::vector<cplx> sample_quasimode(const WkbSolution& wkb, const QuasimodeParams& params, int n) {
  const HermiteVector v = wkb.total();
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double y = -kPi + kTwoPi * j / n;
    double local = std::remainder(y - params.y_star, kTwoPi);
    out[static_cast<std::size_t>(j)] = quasimode_cutoff(local, params.b) * v.value(local);
  }
  return out;
}

// ---------------------------------------------------------------- witness

std::vector<WitnessRecord> witness_experiment(const WitnessInput& in) {
  if (!in.a.is_y_only() || !in.v.is_x_independent())
    throw InvalidInput("witness: fields must depend on y only");
  if (in.k_list.empty()) throw InvalidInput("witness: empty k list");
  for (std::size_t i = 1; i < in.k_list.size(); ++i)
    if (in.k_list[i] <= in.k_list[i - 1]) throw InvalidInput("witness: k list must increase");
  if (!(in.t > 0.0)) throw InvalidInput("witness: T must be positive");

  const ArcSet horizontal = project_region(in.region, Direction::make(1, 0));
  if (!in.region.is_full() && horizontal.signed_distance(in.y_star) >= 0.0)
    throw InvalidInput("witness: region meets the geodesic through the critical point");

  const CircleFunction a1 = y_profile(in.a.a1);
  const CircleFunction a2 = y_profile(in.a.a2);
  const CircleFunction vv = y_profile(in.v);
  const QuasimodeParams params = extract_params_from_fields(a1, a2, vv, in.y_star, in.b);

  const Region exterior =
      Region::from_rects({{0.0, kTwoPi, in.y_star + in.b, in.y_star + kTwoPi - in.b}});

  std::vector<WitnessRecord> out(in.k_list.size());
  parallel_for(in.k_list.size(), [&](std::size_t i) {
    const int k = in.k_list[i];
    const double hbar = 1.0 / std::sqrt(double(k));
    const WkbSolution wkb = build_wkb(params, hbar);

    const int grid = detail::fft_size_at_least(std::max(1024, 8 * in.m));
    detail::Fft1D f(grid);
    const std::vector<cplx> samples = sample_quasimode(wkb, params, grid);
    std::copy(samples.begin(), samples.end(), f.data().begin());
    f.to_coeffs();

    const HermitianOperator block = separable_blocks(a1, a2, vv, {params.sign * k}, in.m).front();
    CVector u0(2 * in.m + 1);
    for (int n = -in.m; n <= in.m; ++n) {
      const double parity = (n % 2 == 0) ? 1.0 : -1.0;  // grid starts at -pi
      u0[n + in.m] = parity * f.data()[static_cast<std::size_t>(detail::wrap_index(n, grid))];
    }

    const EigenDecomposition eig = eigendecompose(block);
    const CMatrix m_omega = region_mass_matrix(in.region, block.basis);
    const CMatrix m_tilde = eig.vectors.adjoint() * m_omega * eig.vectors;
    const CVector c = eig.vectors.adjoint() * u0;
    const CMatrix g = gramian_eigenbasis(eig.values, m_tilde, in.t);
    const double ratio = c.dot(g * c).real() / c.squaredNorm();

    const CMatrix m_ext = region_mass_matrix(exterior, block.basis);
    double worst = 0.0;
    for (int s = 0; s < in.samples; ++s) {
      const double ts = in.t * s / std::max(1, in.samples - 1);
      const ModeVector ut = propagate(eig, {block.basis, u0}, ts);
      const double ext = ut.coeffs.dot(m_ext * ut.coeffs).real();
      worst = std::max(worst, std::sqrt(std::max(ext, 0.0)) / ut.coeffs.norm());
    }
    out[i] = {k, hbar, ratio, worst};
  });
  return out;
}

}  // namespace magobs
