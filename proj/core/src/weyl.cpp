#include "magobs/weyl.hpp"

#include <algorithm>
#include <cmath>

#include "magobs/errors.hpp"
#include "magobs/linalg.hpp"
#include "magobs/parallel.hpp"

namespace magobs {

// ---------------------------------------------------------------- Profile / Symbol

Profile Profile::constant(cplx c) {
  return {[c](double, double) { return c; }, 0, false};
}

Profile Profile::monomial(int a, int b) {
  if (a < 0 || b < 0) throw InvalidInput("Profile::monomial: negative exponent");
  return {[a, b](double xi, double eta) { return cplx{std::pow(xi, a) * std::pow(eta, b)}; },
          a + b, false};
}

Symbol Symbol::from_field(const FourierField2D& f) { return product(f, Profile::constant(1.0)); }

Symbol Symbol::momentum(Profile p) {
  Symbol s;
  s.add_term({0, 0}, std::move(p));
  return s;
}

Symbol Symbol::product(const FourierField2D& f, const Profile& p) {
  Symbol s;
  for (const auto& [m, c] : f.modes()) {
    auto fn = p.fn;
    s.add_term(m, {[fn, c](double xi, double eta) { return c * fn(xi, eta); }, p.degree,
                   p.compact_support});
  }
  return s;
}

void Symbol::add_term(Mode m, Profile p) { terms_.push_back({m, std::move(p)}); }

int Symbol::z_bandwidth() const {
  int k = 0;
  for (const auto& t : terms_) k = std::max({k, std::abs(t.m.k1), std::abs(t.m.k2)});
  return k;
}

int Symbol::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    if (t.profile.degree < 0) return -1;
    d = std::max(d, t.profile.degree);
  }
  return d;
}

cplx Symbol::value(double x, double y, double xi, double eta) const {
  cplx sum{};
  for (const auto& t : terms_) sum += t.profile(xi, eta) * std::polar(1.0, t.m.k1 * x + t.m.k2 * y);
  return sum;
}

Symbol& Symbol::operator+=(const Symbol& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

Symbol operator*(cplx s, const Symbol& a) {
  Symbol out;
  for (const auto& t : a.terms()) {
    auto fn = t.profile.fn;
    out.add_term(t.m, {[fn, s](double xi, double eta) { return s * fn(xi, eta); },
                       t.profile.degree, t.profile.compact_support});
  }
  return out;
}

Symbol transport(const Symbol& a, const std::function<cplx(double, double)>& v1,
                 const std::function<cplx(double, double)>& v2, int degree_increase) {
  Symbol out;
  for (const auto& t : a.terms()) {
    if (t.m == Mode{0, 0}) continue;
    auto fn = t.profile.fn;
    const cplx i1 = kI * double(t.m.k1);
    const cplx i2 = kI * double(t.m.k2);
    const int deg = t.profile.degree < 0 ? -1 : t.profile.degree + degree_increase;
    out.add_term(t.m, {[fn, v1, v2, i1, i2](double xi, double eta) {
                         return (v1(xi, eta) * i1 + v2(xi, eta) * i2) * fn(xi, eta);
                       },
                       deg, t.profile.compact_support});
  }
  return out;
}

// ---------------------------------------------------------------- quantization

CMatrix quantize(const Symbol& a, double h, const ModeBasis& basis) {
  if (!(h > 0.0)) throw InvalidInput("quantize: h must be positive");
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix m = CMatrix::Zero(n, n);
  parallel_for(basis.size(), [&](std::size_t col) {
    const Mode kp = basis.mode(col);
    for (const auto& t : a.terms()) {
      const auto row = basis.index(kp + t.m);
      if (!row) continue;
      m(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) +=
          t.profile(h * (kp.k1 + 0.5 * t.m.k1), h * (kp.k2 + 0.5 * t.m.k2));
    }
  });
  return m;
}

CVector apply_symbol(const Symbol& a, double h, const ModeBasis& basis, const CVector& state) {
  if (!(h > 0.0)) throw InvalidInput("apply_symbol: h must be positive");
  if (static_cast<std::size_t>(state.size()) != basis.size())
    throw InvalidInput("apply_symbol: state does not match basis");
  CVector out = CVector::Zero(state.size());
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const cplx c = state[static_cast<Eigen::Index>(col)];
    if (c == cplx{}) continue;
    const Mode kp = basis.mode(col);
    for (const auto& t : a.terms()) {
      const auto row = basis.index(kp + t.m);
      if (!row) continue;
      out[static_cast<Eigen::Index>(*row)] +=
          t.profile(h * (kp.k1 + 0.5 * t.m.k1), h * (kp.k2 + 0.5 * t.m.k2)) * c;
    }
  }
  return out;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw InvalidInput("commutator: dimension mismatch");
  return a * b - b * a;
}

CMatrix commutator_with_diagonal(const CMatrix& a, const CVector& d) {
  if (a.rows() != a.cols() || a.rows() != d.size())
    throw InvalidInput("commutator_with_diagonal: dimension mismatch");
  CMatrix out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, j) = a(i, j) * (d[j] - d[i]);
  return out;
}

CMatrix conjugate_exp(const CMatrix& g, const CMatrix& h) {
  if (g.rows() != g.cols() || h.rows() != h.cols() || g.rows() != h.rows())
    throw InvalidInput("conjugate_exp: dimension mismatch");
  return expm(g) * h * expm(-g);
}

WignerSample wigner_eval(const ModeVector& state, const Symbol& a, double h,
                         const std::string& label) {
  const CVector av = apply_symbol(a, h, state.basis, state.coeffs);
  return {label, h, state.coeffs.dot(av)};
}

// ---------------------------------------------------------------- cutoffs

double bump(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

namespace {
double flat(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace

double plateau(double t, double inner, double outer) {
  const double a = std::abs(t);
  if (a <= inner) return 1.0;
  if (a >= outer) return 0.0;
  const double u = (a - inner) / (outer - inner);
  const double f0 = flat(1.0 - u);
  return f0 / (f0 + flat(u));
}

bool validate_cutoffs(const NormalFormSpec& spec, int samples) {
  for (int i = 0; i < samples; ++i) {
    const double xi = -2.0 + 4.0 * i / (samples - 1);
    const double d = std::abs(std::abs(xi) - 1.0);
    const double p = spec.psi(xi);
    if (p < 0.0 || p > 1.0) return false;
    if (d <= 1.0 / 16.0 && p != 1.0) return false;
    if (d > 1.0 / 8.0 && p != 0.0) return false;
    const double eta = -3.0 + 6.0 * i / (samples - 1);
    const double th = spec.theta(eta);
    if (th < 0.0 || th > 1.0) return false;
    if (std::abs(eta) <= 1.0 && th != 1.0) return false;
    if (std::abs(eta) > 2.0 && th != 0.0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- normal form

namespace {

FourierField2D x_average(const FourierField2D& f) {
  return directional_average(f, Direction::make(1, 0));
}

// h^2 H_{A,V} as a Weyl quantization: |zeta|^2 - 2h A.zeta + h^2 (|A|^2 + V).
Symbol scaled_hamiltonian(const VectorPotential& a, const FourierField2D& v, double h) {
  Symbol s = Symbol::momentum(
      {[](double xi, double eta) { return cplx{xi * xi + eta * eta}; }, 2, false});
  s += Symbol::product(-2.0 * h * a.a1, Profile::monomial(1, 0));
  s += Symbol::product(-2.0 * h * a.a2, Profile::monomial(0, 1));
  s += Symbol::from_field(h * h * (a.squared_norm() + v));
  return s;
}

}  // namespace

Symbol normal_form_symbol(const VectorPotential& a, const NormalFormSpec& spec) {
  if (!a.a1.is_x_independent(1e-12))
    throw InvalidInput("normal_form_g2: A1 depends on x; apply the first gauge first");
  const FourierField2D f = x_antiderivative(x_average(a.a2) - a.a2);
  auto psi = spec.psi;
  auto theta = spec.theta;
  const Profile p{[psi, theta](double xi, double eta) {
                    const double ps = psi(xi);
                    if (ps == 0.0) return cplx{};
                    return kI * (ps / xi) * theta(eta) * eta;
                  },
                  -1, true};
  return Symbol::product(f, p);
}

ModeBasis normal_form_basis(double h, double alpha, int n1, int n2, int field_bandwidth) {
  const double sigma_y = std::pow(h, alpha - 1.0) / 3.0;
  const int ny = std::max(n2, static_cast<int>(std::ceil(5.0 * sigma_y)) + 2 * field_bandwidth);
  return ModeBasis({static_cast<int>(std::lround(1.0 / h)), 0}, n1, ny);
}

NormalFormResult normal_form_g2(const VectorPotential& a, const FourierField2D& v,
                                const NormalFormSpec& spec, const ModeBasis& basis) {
  if (!(spec.h > 0.0)) throw InvalidInput("normal_form_g2: h must be positive");
  if (!(spec.alpha > 0.0 && spec.alpha < 0.5))
    throw InvalidInput("normal_form_g2: alpha must lie in (0, 1/2)");
  const double h = spec.h;
  const Symbol g_sym = normal_form_symbol(a, spec);
  NormalFormResult out;
  out.g2 = quantize(g_sym, h, basis);

  const CMatrix p1q1 = quantize(scaled_hamiltonian(a, v, h), h, basis);
  Symbol p2_sym = Symbol::momentum(
      {[](double xi, double eta) { return cplx{xi * xi + eta * eta}; }, 2, false});
  p2_sym += Symbol::product(-2.0 * h * x_average(a.a1), Profile::monomial(1, 0));
  p2_sym += Symbol::product(-2.0 * h * x_average(a.a2), Profile::monomial(0, 1));

  const CMatrix u = expm(out.g2);
  const CMatrix u_inv = expm(-out.g2);

  const double sigma_x = 1.0 / (48.0 * h);
  const double sigma_y = std::pow(h, spec.alpha - 1.0) / 3.0;
  const double c1 = basis.center().k1;
  double worst = 0.0;
  for (double shift : {0.0, 1.0, -1.0}) {
    const ModeVector packet = gaussian_packet(basis, c1, shift * sigma_y, sigma_x, sigma_y);
    const CVector ev = u * (p1q1 * (u_inv * packet.coeffs));
    const CVector pv = apply_symbol(p2_sym, h, basis, packet.coeffs);
    worst = std::max(worst, (ev - pv).norm() / packet.norm());
  }

  const RVector ig = hermitian_eigenvalues(kI * 0.5 * (out.g2 - out.g2.adjoint()));
  out.record = {h, spec.alpha, worst, ig.cwiseAbs().maxCoeff(), basis.size()};
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidInput("loglog_slope: need at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidInput("loglog_slope: nonpositive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RemainderScan remainder_scan(const VectorPotential& a, const FourierField2D& v,
                             const std::vector<double>& h_list, double alpha, int n1, int n2) {
  RemainderScan scan;
  std::vector<double> hs;
  std::vector<double> rs;
  const int k = std::max(a.bandwidth(), v.bandwidth());
  for (double h : h_list) {
    NormalFormSpec spec;
    spec.h = h;
    spec.alpha = alpha;
    const ModeBasis basis = normal_form_basis(h, alpha, n1, n2, k);
    scan.records.push_back(normal_form_g2(a, v, spec, basis).record);
    hs.push_back(h);
    rs.push_back(scan.records.back().remainder_norm);
  }
  if (hs.size() >= 2) scan.slope = loglog_slope(hs, rs);
  return scan;
}

}  // namespace magobs
