#include "magobs/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "fft.hpp"
#include "magobs/errors.hpp"

namespace magobs {

namespace {

constexpr double kHermitianTol = 1e-12;

int linf(Mode k) { return std::max(std::abs(k.k1), std::abs(k.k2)); }

}  // namespace

// ---------------------------------------------------------------- FourierField2D

FourierField2D::FourierField2D(int bandwidth, bool is_real)
    : bandwidth_(bandwidth),
      real_(is_real),
      coeffs_(static_cast<std::size_t>((2 * bandwidth + 1) * (2 * bandwidth + 1))) {
  if (bandwidth < 0) throw InvalidInput("FourierField2D: negative bandwidth");
}

FourierField2D FourierField2D::from_modes(const std::vector<std::pair<Mode, cplx>>& modes,
                                          bool is_real) {
  int k_max = 0;
  for (const auto& [k, c] : modes) k_max = std::max(k_max, linf(k));
  FourierField2D f(k_max, is_real);
  // Records are accumulated first, then Hermitian consistency is checked.
  for (const auto& [k, c] : modes) f.coeffs_[f.slot(k)] = c;
  if (is_real) {
    for (const auto& [k, c] : modes) {
      const cplx partner = f.coeffs_[f.slot(-k)];
      if (k == Mode{0, 0}) {
        if (std::abs(c.imag()) > kHermitianTol * (1.0 + std::abs(c)))
          throw InvalidInput("FourierField2D: real field needs a real mean");
        f.coeffs_[f.slot(k)] = c.real();
      } else if (partner == cplx{}) {
        f.coeffs_[f.slot(-k)] = std::conj(c);
      } else if (std::abs(partner - std::conj(c)) > kHermitianTol * (1.0 + std::abs(c))) {
        throw InvalidInput("FourierField2D: coefficients violate Hermitian symmetry at (" +
                           std::to_string(k.k1) + "," + std::to_string(k.k2) + ")");
      }
    }
  }
  return f;
}

FourierField2D FourierField2D::constant(double c) {
  FourierField2D f(0, true);
  f.coeffs_[0] = c;
  return f;
}

FourierField2D FourierField2D::cosine(Mode k, double amp, double phase) {
  FourierField2D f(linf(k), true);
  if (k == Mode{0, 0}) {
    f.set(k, amp * std::cos(phase));
  } else {
    f.set(k, 0.5 * amp * std::polar(1.0, phase));
  }
  return f;
}

FourierField2D FourierField2D::sine(Mode k, double amp) {
  if (k == Mode{0, 0}) return FourierField2D(0, true);
  FourierField2D f(linf(k), true);
  f.set(k, cplx{0.0, -0.5 * amp});
  return f;
}

FourierField2D FourierField2D::random_real(int bandwidth, std::mt19937_64& rng, double amp,
                                           bool zero_mean) {
  std::normal_distribution<double> normal(0.0, 1.0);
  FourierField2D f(bandwidth, true);
  for (int k1 = -bandwidth; k1 <= bandwidth; ++k1) {
    for (int k2 = -bandwidth; k2 <= bandwidth; ++k2) {
      const Mode k{k1, k2};
      if (k < Mode{0, 0}) continue;  // partner written by set()
      if (k == Mode{0, 0}) {
        f.set(k, zero_mean ? 0.0 : amp * normal(rng));
        continue;
      }
      const double re = normal(rng);
      const double im = normal(rng);
      f.set(k, amp * cplx{re, im} / std::sqrt(2.0));
    }
  }
  return f;
}

bool FourierField2D::in_range(Mode k) const { return linf(k) <= bandwidth_; }

cplx FourierField2D::coeff(Mode k) const { return in_range(k) ? coeffs_[slot(k)] : cplx{}; }

void FourierField2D::set(Mode k, cplx c) {
  if (!in_range(k)) throw InvalidInput("FourierField2D::set: mode outside bandwidth");
  if (!real_) {
    coeffs_[slot(k)] = c;
    return;
  }
  if (k == Mode{0, 0}) {
    coeffs_[slot(k)] = c.real();
    return;
  }
  coeffs_[slot(k)] = c;
  coeffs_[slot(-k)] = std::conj(c);
}

std::vector<std::pair<Mode, cplx>> FourierField2D::modes(double tol) const {
  std::vector<std::pair<Mode, cplx>> out;
  for (int k1 = -bandwidth_; k1 <= bandwidth_; ++k1)
    for (int k2 = -bandwidth_; k2 <= bandwidth_; ++k2) {
      const cplx c = coeffs_[slot({k1, k2})];
      if (std::abs(c) > tol) out.emplace_back(Mode{k1, k2}, c);
    }
  return out;
}

cplx FourierField2D::value(double x, double y) const {
  cplx sum{};
  for (int k1 = -bandwidth_; k1 <= bandwidth_; ++k1)
    for (int k2 = -bandwidth_; k2 <= bandwidth_; ++k2) {
      const cplx c = coeffs_[slot({k1, k2})];
      if (c != cplx{}) sum += c * std::polar(1.0, k1 * x + k2 * y);
    }
  return sum;
}

FourierField2D FourierField2D::dx() const {
  FourierField2D d(bandwidth_, real_);
  for (int k1 = -bandwidth_; k1 <= bandwidth_; ++k1)
    for (int k2 = -bandwidth_; k2 <= bandwidth_; ++k2)
      d.coeffs_[slot({k1, k2})] = kI * double(k1) * coeffs_[slot({k1, k2})];
  return d;
}

FourierField2D FourierField2D::dy() const {
  FourierField2D d(bandwidth_, real_);
  for (int k1 = -bandwidth_; k1 <= bandwidth_; ++k1)
    for (int k2 = -bandwidth_; k2 <= bandwidth_; ++k2)
      d.coeffs_[slot({k1, k2})] = kI * double(k2) * coeffs_[slot({k1, k2})];
  return d;
}

FourierField2D FourierField2D::widened(int bandwidth) const {
  FourierField2D w(std::max(bandwidth, bandwidth_), real_);
  for (int k1 = -bandwidth_; k1 <= bandwidth_; ++k1)
    for (int k2 = -bandwidth_; k2 <= bandwidth_; ++k2)
      w.coeffs_[w.slot({k1, k2})] = coeffs_[slot({k1, k2})];
  return w;
}

FourierField2D FourierField2D::trimmed(double tol) const {
  int k_max = 0;
  for (int k1 = -bandwidth_; k1 <= bandwidth_; ++k1)
    for (int k2 = -bandwidth_; k2 <= bandwidth_; ++k2)
      if (std::abs(coeffs_[slot({k1, k2})]) > tol) k_max = std::max(k_max, linf({k1, k2}));
  FourierField2D t(k_max, real_);
  for (int k1 = -k_max; k1 <= k_max; ++k1)
    for (int k2 = -k_max; k2 <= k_max; ++k2) {
      const cplx c = coeffs_[slot({k1, k2})];
      t.coeffs_[t.slot({k1, k2})] = std::abs(c) > tol ? c : cplx{};
    }
  return t;
}

bool FourierField2D::is_constant(double tol) const {
  for (int k1 = -bandwidth_; k1 <= bandwidth_; ++k1)
    for (int k2 = -bandwidth_; k2 <= bandwidth_; ++k2)
      if ((k1 != 0 || k2 != 0) && std::abs(coeffs_[slot({k1, k2})]) > tol) return false;
  return true;
}

bool FourierField2D::is_x_independent(double tol) const {
  for (int k1 = -bandwidth_; k1 <= bandwidth_; ++k1)
    for (int k2 = -bandwidth_; k2 <= bandwidth_; ++k2)
      if (k1 != 0 && std::abs(coeffs_[slot({k1, k2})]) > tol) return false;
  return true;
}

double FourierField2D::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

FourierField2D& FourierField2D::operator+=(const FourierField2D& o) {
  if (o.bandwidth_ > bandwidth_) *this = widened(o.bandwidth_);
  real_ = real_ && o.real_;
  for (int k1 = -o.bandwidth_; k1 <= o.bandwidth_; ++k1)
    for (int k2 = -o.bandwidth_; k2 <= o.bandwidth_; ++k2)
      coeffs_[slot({k1, k2})] += o.coeffs_[o.slot({k1, k2})];
  return *this;
}

FourierField2D& FourierField2D::operator-=(const FourierField2D& o) {
  FourierField2D neg = o;
  neg *= -1.0;
  return *this += neg;
}

FourierField2D& FourierField2D::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

FourierField2D operator*(const FourierField2D& a, const FourierField2D& b) {
  const int ka = a.bandwidth_;
  const int kb = b.bandwidth_;
  FourierField2D p(ka + kb, a.real_ && b.real_);
  for (int a1 = -ka; a1 <= ka; ++a1)
    for (int a2 = -ka; a2 <= ka; ++a2) {
      const cplx ca = a.coeffs_[a.slot({a1, a2})];
      if (ca == cplx{}) continue;
      for (int b1 = -kb; b1 <= kb; ++b1)
        for (int b2 = -kb; b2 <= kb; ++b2) {
          const cplx cb = b.coeffs_[b.slot({b1, b2})];
          if (cb == cplx{}) continue;
          p.coeffs_[p.slot({a1 + b1, a2 + b2})] += ca * cb;
        }
    }
  return p;
}

VectorPotential operator+(const VectorPotential& a, const VectorPotential& b) {
  return {a.a1 + b.a1, a.a2 + b.a2};
}

VectorPotential gradient(const FourierField2D& g) { return {g.dx(), g.dy()}; }

// ---------------------------------------------------------------- CircleFunction

CircleFunction::CircleFunction(double ell, int max_mode, bool is_real)
    : ell_(ell),
      max_mode_(max_mode),
      real_(is_real),
      coeffs_(static_cast<std::size_t>(2 * max_mode + 1)) {
  if (!(ell > 0.0)) throw InvalidInput("CircleFunction: circumference must be positive");
  if (max_mode < 0) throw InvalidInput("CircleFunction: negative max mode");
}

CircleFunction::CircleFunction(double ell, std::vector<cplx> coeffs, bool is_real)
    : ell_(ell), max_mode_(static_cast<int>(coeffs.size() / 2)), real_(is_real),
      coeffs_(std::move(coeffs)) {
  if (!(ell > 0.0)) throw InvalidInput("CircleFunction: circumference must be positive");
  if (coeffs_.size() % 2 != 1) throw InvalidInput("CircleFunction: need 2M+1 coefficients");
}

CircleFunction CircleFunction::from_modes(double ell,
                                          const std::vector<std::pair<int, cplx>>& modes,
                                          bool is_real) {
  int m_max = 0;
  for (const auto& [m, c] : modes) m_max = std::max(m_max, std::abs(m));
  CircleFunction f(ell, m_max, is_real);
  for (const auto& [m, c] : modes) f.set(m, c);
  return f;
}

cplx CircleFunction::coeff(int m) const {
  return std::abs(m) <= max_mode_ ? coeffs_[slot(m)] : cplx{};
}

void CircleFunction::set(int m, cplx c) {
  if (std::abs(m) > max_mode_) throw InvalidInput("CircleFunction::set: mode out of range");
  if (!real_) {
    coeffs_[slot(m)] = c;
  } else if (m == 0) {
    coeffs_[slot(0)] = c.real();
  } else {
    coeffs_[slot(m)] = c;
    coeffs_[slot(-m)] = std::conj(c);
  }
}

cplx CircleFunction::value(double s) const {
  const double w = frequency();
  cplx sum{};
  for (int m = -max_mode_; m <= max_mode_; ++m) {
    const cplx c = coeffs_[slot(m)];
    if (c != cplx{}) sum += c * std::polar(1.0, m * w * s);
  }
  return sum;
}

CircleFunction CircleFunction::derivative(int order) const {
  CircleFunction d = *this;
  const double w = frequency();
  for (int m = -max_mode_; m <= max_mode_; ++m) d.coeffs_[slot(m)] *= std::pow(kI * (m * w), order);
  return d;
}

bool CircleFunction::is_constant(double tol) const {
  for (int m = -max_mode_; m <= max_mode_; ++m)
    if (m != 0 && std::abs(coeffs_[slot(m)]) > tol) return false;
  return true;
}

double CircleFunction::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

CircleFunction& CircleFunction::operator+=(const CircleFunction& o) {
  if (std::abs(o.ell_ - ell_) > 1e-12 * ell_)
    throw InvalidInput("CircleFunction: circumference mismatch");
  if (o.max_mode_ > max_mode_) {
    CircleFunction w(ell_, o.max_mode_, real_);
    for (int m = -max_mode_; m <= max_mode_; ++m) w.coeffs_[w.slot(m)] = coeffs_[slot(m)];
    *this = std::move(w);
  }
  real_ = real_ && o.real_;
  for (int m = -o.max_mode_; m <= o.max_mode_; ++m) coeffs_[slot(m)] += o.coeffs_[o.slot(m)];
  return *this;
}

CircleFunction& CircleFunction::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

CircleFunction operator*(const CircleFunction& a, const CircleFunction& b) {
  if (std::abs(a.ell_ - b.ell_) > 1e-12 * a.ell_)
    throw InvalidInput("CircleFunction: circumference mismatch");
  CircleFunction p(a.ell_, a.max_mode_ + b.max_mode_, a.real_ && b.real_);
  for (int i = -a.max_mode_; i <= a.max_mode_; ++i)
    for (int j = -b.max_mode_; j <= b.max_mode_; ++j)
      p.coeffs_[p.slot(i + j)] += a.coeffs_[a.slot(i)] * b.coeffs_[b.slot(j)];
  return p;
}

// ---------------------------------------------------------------- averages

FourierField2D directional_average(const FourierField2D& f, const Direction& dir) {
  FourierField2D out(f.bandwidth(), f.is_real());
  for (const auto& [k, c] : f.modes()) {
    if (k.k1 * dir.p() + k.k2 * dir.q() == 0) out.set(k, c);
  }
  return out;
}

CircleFunction transversal_profile(const FourierField2D& f, const Direction& dir) {
  const Mode o = dir.orthogonal_mode();
  const int m_max = f.bandwidth() / dir.height();
  CircleFunction g(dir.circumference(), m_max, f.is_real());
  for (int m = -m_max; m <= m_max; ++m) g.set(m, f.coeff({m * o.k1, m * o.k2}));
  return g;
}

CircleFunction a_gamma(const VectorPotential& a, const Direction& dir) {
  const Mode o = dir.orthogonal_mode();
  const double r = dir.length();
  const int m_max = a.bandwidth() / dir.height();
  CircleFunction g(dir.circumference(), m_max, true);
  for (int m = 0; m <= m_max; ++m) {
    const Mode k{m * o.k1, m * o.k2};
    g.set(m, (a.a1.coeff(k) * double(dir.p()) + a.a2.coeff(k) * double(dir.q())) / r);
  }
  return g;
}

FourierField2D magnetic_field(const VectorPotential& a) { return a.a2.dx() - a.a1.dy(); }

CircleFunction b_gamma_average(const VectorPotential& a, const Direction& dir) {
  return transversal_profile(magnetic_field(a), dir);
}

// ---------------------------------------------------------------- gauge

FourierField2D gauge_g1(const VectorPotential& a) {
  const FourierField2D& a1 = a.a1;
  const int k = a1.bandwidth();
  FourierField2D g(k, true);
  for (int k2 = -k; k2 <= k; ++k2) {
    cplx lower_limit{};
    for (int k1 = -k; k1 <= k; ++k1) {
      if (k1 == 0) continue;
      const cplx c = a1.coeff({k1, k2});
      g.set({k1, k2}, -c / (kI * double(k1)));
      // e^{i k1 (-pi)} = (-1)^{k1}
      lower_limit += ((k1 % 2 == 0) ? 1.0 : -1.0) * c / (kI * double(k1));
    }
    if (k2 >= 0) g.set({0, k2}, lower_limit);
  }
  return g;
}

VectorPotential first_averaging(const VectorPotential& a) { return a + gradient(gauge_g1(a)); }

FourierField2D x_antiderivative(const FourierField2D& f, double tol) {
  const int k = f.bandwidth();
  FourierField2D g(k, f.is_real());
  for (int k2 = -k; k2 <= k; ++k2) {
    if (std::abs(f.coeff({0, k2})) > tol)
      throw InvalidInput("x_antiderivative: input has nonzero x-mean");
  }
  for (const auto& [m, c] : f.modes()) {
    if (m.k1 == 0) continue;
    if (f.is_real() && m < Mode{0, 0}) continue;
    g.set(m, c / (kI * double(m.k1)));
  }
  return g;
}

CircleFunction y_profile(const FourierField2D& f, double tol) {
  if (!f.is_x_independent(tol)) throw InvalidInput("y_profile: field depends on x");
  CircleFunction g(kTwoPi, f.bandwidth(), f.is_real());
  for (int m = -f.bandwidth(); m <= f.bandwidth(); ++m) {
    if (f.is_real() && m < 0) continue;
    g.set(m, f.coeff({0, m}));
  }
  return g;
}

FourierField2D field_from_y_profile(const CircleFunction& f) {
  if (std::abs(f.circumference() - kTwoPi) > 1e-12)
    throw InvalidInput("field_from_y_profile: circle must have circumference 2 pi");
  FourierField2D g(f.max_mode(), f.is_real());
  for (int m = -f.max_mode(); m <= f.max_mode(); ++m) {
    if (f.is_real() && m < 0) continue;
    g.set({0, m}, f.coeff(m));
  }
  return g;
}

ModeVector apply_gauge(const ModeVector& state, const FourierField2D& g, int sign,
                       double support_tol) {
  if (sign != 1 && sign != -1) throw InvalidInput("apply_gauge: sign must be +1 or -1");
  if (static_cast<std::size_t>(state.coeffs.size()) != state.basis.size())
    throw InvalidInput("apply_gauge: coefficient count does not match basis");
  const ModeBasis& basis = state.basis;
  const int kg = g.bandwidth();

  const double scale = std::max(state.coeffs.cwiseAbs().maxCoeff(), 1e-300);
  double edge_mass = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const cplx c = state.coeffs[static_cast<Eigen::Index>(i)];
    if (std::abs(c) > support_tol * scale && basis.interior_margin(basis.mode(i)) < kg)
      edge_mass += std::norm(c);
  }
  if (edge_mass > 0.0) {
    throw TruncationError("apply_gauge: state has mass within the gauge bandwidth (" +
                              std::to_string(kg) + ") of the basis edge",
                          edge_mass);
  }

  const Mode c = basis.center();
  const int k_max = std::max(std::abs(c.k1) + basis.half_width_x(),
                             std::abs(c.k2) + basis.half_width_y());
  const int n = detail::fft_size_at_least(4 * (k_max + kg));

  detail::Fft2D u(n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Mode k = basis.mode(i);
    u.at(detail::wrap_index(k.k1, n), detail::wrap_index(k.k2, n)) =
        state.coeffs[static_cast<Eigen::Index>(i)];
  }
  u.to_grid();

  detail::Fft2D phase(n);
  for (const auto& [k, coef] : g.modes())
    phase.at(detail::wrap_index(k.k1, n), detail::wrap_index(k.k2, n)) = coef;
  phase.to_grid();

  for (std::size_t j = 0; j < u.data().size(); ++j)
    u.data()[j] *= std::polar(1.0, sign * phase.data()[j].real());
  u.to_coeffs();

  ModeVector out{basis, CVector::Zero(static_cast<Eigen::Index>(basis.size()))};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Mode k = basis.mode(i);
    out.coeffs[static_cast<Eigen::Index>(i)] =
        u.at(detail::wrap_index(k.k1, n), detail::wrap_index(k.k2, n));
  }
  return out;
}

// ---------------------------------------------------------------- critical points

namespace {

struct Derivs {
  double d1;
  double d2;
};

Derivs derivs_at(const CircleFunction& d1, const CircleFunction& d2, double s) {
  return {d1.value(s).real(), d2.value(s).real()};
}

double circular_distance(double a, double b, double ell) {
  double d = std::fmod(std::abs(a - b), ell);
  return std::min(d, ell - d);
}

}  // namespace

CriticalPointSet critical_points(const CircleFunction& f, double degeneracy_tol) {
  if (!f.is_real()) throw InvalidInput("critical_points: function must be real");
  CriticalPointSet result;
  if (f.is_constant(1e-12)) {
    result.all_critical = true;
    return result;
  }
  const double ell = f.circumference();
  const double w = f.frequency();
  const CircleFunction d1 = f.derivative(1);
  const CircleFunction d2 = f.derivative(2);

  const double scale = d1.max_abs_coeff();
  int m = f.max_mode();
  while (m > 0 && std::abs(d1.coeff(m)) <= 1e-14 * scale) --m;

  // f'(s) = w^{-m} P(w), P(w) = sum_{j=0}^{2m} a_j w^j, a_j = c'_{j-m}.
  const int deg = 2 * m;
  Eigen::VectorXcd a(deg + 1);
  for (int j = 0; j <= deg; ++j) a[j] = d1.coeff(j - m);
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int j = 0; j < deg; ++j) companion(0, j) = -a[deg - 1 - j] / a[deg];
  for (int j = 1; j < deg; ++j) companion(j, j - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);

  const double d1_scale = std::max(scale, 1e-300);
  std::vector<CriticalPoint> found;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const cplx root = solver.eigenvalues()[i];
    // Double roots of f' come out of the companion matrix perturbed by
    // O(sqrt(eps)); the window is wider than that and the Newton step plus
    // the |f'| check below decide.
    if (std::abs(std::abs(root) - 1.0) > 1e-6) continue;
    double s = std::arg(root) / w;
    for (int it = 0; it < 20; ++it) {
      const Derivs dv = derivs_at(d1, d2, s);
      if (dv.d2 == 0.0) break;
      const double step = dv.d1 / dv.d2;
      s -= step;
      if (std::abs(step) < 1e-15 * ell) break;
    }
    s = std::fmod(s, ell);
    if (s < 0.0) s += ell;
    const Derivs dv = derivs_at(d1, d2, s);
    if (std::abs(dv.d1) > 1e-8 * d1_scale) continue;
    found.push_back({s, dv.d2, std::abs(dv.d2) < degeneracy_tol});
  }
  std::sort(found.begin(), found.end(),
            [](const CriticalPoint& x, const CriticalPoint& y) { return x.position < y.position; });
  for (const auto& cp : found) {
    const bool duplicate = std::any_of(result.points.begin(), result.points.end(),
                                       [&](const CriticalPoint& q) {
                                         return circular_distance(q.position, cp.position, ell) <
                                                1e-6 * ell;
                                       });
    if (!duplicate) result.points.push_back(cp);
  }
  return result;
}

}  // namespace magobs
