#include "magobs/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "magobs/errors.hpp"
#include "magobs/linalg.hpp"
#include "magobs/parallel.hpp"
#include "magobs/weyl.hpp"

namespace magobs {

namespace {

struct Coupling {
  Mode m;
  cplx a1;
  cplx a2;
  cplx w;
};

std::vector<Coupling> couplings(const VectorPotential& a, const FourierField2D& v) {
  const FourierField2D w = a.squared_norm() + v;
  std::vector<Mode> support;
  for (const auto* f : {&a.a1, &a.a2, &w})
    for (const auto& [m, c] : f->modes()) support.push_back(m);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  std::vector<Coupling> out;
  out.reserve(support.size());
  for (const Mode m : support) out.push_back({m, a.a1.coeff(m), a.a2.coeff(m), w.coeff(m)});
  return out;
}

void check_window(const std::vector<Coupling>& cs, const ModeBasis& basis) {
  int kx = 0;
  int ky = 0;
  for (const auto& c : cs) {
    kx = std::max(kx, std::abs(c.m.k1));
    ky = std::max(ky, std::abs(c.m.k2));
  }
  if (basis.half_width_x() >= 2 * kx && basis.half_width_y() >= 2 * ky) return;
  double dropped = 0.0;
  for (const auto& c : cs) {
    if (2 * std::abs(c.m.k1) > basis.half_width_x() || 2 * std::abs(c.m.k2) > basis.half_width_y())
      dropped += std::norm(c.a1) + std::norm(c.a2) + std::norm(c.w);
  }
  throw TruncationError("assemble: basis half-widths (" + std::to_string(basis.half_width_x()) +
                            ", " + std::to_string(basis.half_width_y()) +
                            ") below twice the field bandwidth (" + std::to_string(kx) + ", " +
                            std::to_string(ky) + ")",
                        dropped);
}

}  // namespace

HermitianOperator assemble(const VectorPotential& a, const FourierField2D& v,
                           const ModeBasis& basis) {
  const auto cs = couplings(a, v);
  check_window(cs, basis);
  const auto n = static_cast<Eigen::Index>(basis.size());
  HermitianOperator op{basis, CMatrix::Zero(n, n)};
  parallel_for(basis.size(), [&](std::size_t col) {
    const Mode kp = basis.mode(col);
    const auto j = static_cast<Eigen::Index>(col);
    op.entries(j, j) += double(kp.k1) * kp.k1 + double(kp.k2) * kp.k2;
    for (const auto& c : cs) {
      const auto row = basis.index(kp + c.m);
      if (!row) continue;
      const double s1 = 2.0 * kp.k1 + c.m.k1;
      const double s2 = 2.0 * kp.k2 + c.m.k2;
      op.entries(static_cast<Eigen::Index>(*row), j) += -(s1 * c.a1 + s2 * c.a2) + c.w;
    }
  });
  return op;
}

EigenDecomposition eigendecompose(const HermitianOperator& h) {
  const double scale = std::max(1.0, h.entries.cwiseAbs().maxCoeff());
  if (hermitian_defect(h.entries) > 1e-12 * scale)
    throw NumericalError("eigendecompose: matrix is not Hermitian");
  const CMatrix sym = 0.5 * (h.entries + h.entries.adjoint());
  HermitianEigen he = hermitian_eigen(sym);
  for (Eigen::Index j = 0; j < he.vectors.cols(); ++j) {
    Eigen::Index imax = 0;
    he.vectors.col(j).cwiseAbs().maxCoeff(&imax);
    const cplx c = he.vectors(imax, j);
    he.vectors.col(j) *= std::conj(c) / std::abs(c);
  }
  return {h.basis, std::move(he.values), std::move(he.vectors)};
}

ModeVector propagate(const EigenDecomposition& eig, const ModeVector& state, double t) {
  if (!(state.basis == eig.basis)) throw InvalidInput("propagate: basis mismatch");
  CVector c = eig.vectors.adjoint() * state.coeffs;
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -eig.values[i] * t);
  return {state.basis, eig.vectors * c};
}

double energy(const EigenDecomposition& eig, const ModeVector& state) {
  const CVector c = eig.vectors.adjoint() * state.coeffs;
  return (c.cwiseAbs2().cwiseProduct(eig.values)).sum() / c.squaredNorm();
}

double projector_profile(double t) { return plateau(t, 0.25, 1.0); }

SpectralProjector spectral_projector(const EigenDecomposition& eig, const ProjectorSpec& spec) {
  if (!(spec.h > 0.0 && spec.h <= 1.0)) throw InvalidInput("spectral_projector: need 0 < h <= 1");
  if (!(spec.rho > 0.0 && spec.rho < 1.0))
    throw InvalidInput("spectral_projector: need 0 < rho < 1");
  SpectralProjector p;
  const Eigen::Index n = eig.values.size();
  p.weights = RVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (spec.h * spec.h * eig.values[i] - 1.0) / spec.rho;
    const double w = spec.profile == ProjectorProfile::hard ? (std::abs(t) <= 1.0 ? 1.0 : 0.0)
                                                            : projector_profile(t);
    p.weights[i] = w;
    if (w != 0.0) p.selected.push_back(i);
  }
  const auto r = static_cast<Eigen::Index>(p.selected.size());
  p.range = CMatrix(n, r);
  RVector w(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    p.range.col(j) = eig.vectors.col(p.selected[static_cast<std::size_t>(j)]);
    w[j] = p.weights[p.selected[static_cast<std::size_t>(j)]];
  }
  p.matrix = p.range * w.asDiagonal() * p.range.adjoint();
  return p;
}

std::vector<HermitianOperator> separable_blocks(const CircleFunction& a1, const CircleFunction& a2,
                                                const CircleFunction& v,
                                                const std::vector<int>& k_list, int m) {
  for (const auto* f : {&a1, &a2, &v}) {
    if (std::abs(f->circumference() - kTwoPi) > 1e-12)
      throw InvalidInput("separable_blocks: profiles must live on a circle of length 2 pi");
    if (!f->is_real()) throw InvalidInput("separable_blocks: profiles must be real");
  }
  if (m < 0) throw InvalidInput("separable_blocks: negative mode count");
  const CircleFunction w = a1 * a1 + a2 * a2 + v;
  const int kw = w.max_mode();
  if (m < 2 * std::max({a1.max_mode(), a2.max_mode(), v.max_mode()})) {
    double dropped = 0.0;
    for (int j = -kw; j <= kw; ++j)
      if (2 * std::abs(j) > m)
        dropped += std::norm(a1.coeff(j)) + std::norm(a2.coeff(j)) + std::norm(w.coeff(j));
    throw TruncationError("separable_blocks: y half-width below twice the field bandwidth",
                          dropped);
  }
  std::vector<HermitianOperator> blocks(k_list.size());
  parallel_for(k_list.size(), [&](std::size_t b) {
    const int k = k_list[b];
    const ModeBasis basis({k, 0}, 0, m);
    CMatrix h = CMatrix::Zero(2 * m + 1, 2 * m + 1);
    for (int np = -m; np <= m; ++np) {
      const Eigen::Index col = np + m;
      h(col, col) += double(k) * k + double(np) * np;
      for (int d = -kw; d <= kw; ++d) {
        const int n = np + d;
        if (n < -m || n > m) continue;
        h(n + m, col) += -2.0 * k * a1.coeff(d) - double(n + np) * a2.coeff(d) + w.coeff(d);
      }
    }
    blocks[b] = {basis, std::move(h)};
  });
  return blocks;
}

std::vector<HermitianOperator> separable_blocks(const VectorPotential& a, const FourierField2D& v,
                                                const std::vector<int>& k_list, int m) {
  if (!a.is_y_only() || !v.is_x_independent())
    throw InvalidInput("separable_blocks: fields must depend on y only");
  return separable_blocks(y_profile(a.a1), y_profile(a.a2), y_profile(v), k_list, m);
}

CMatrix multiplication_operator(const FourierField2D& f, const ModeBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix m = CMatrix::Zero(n, n);
  const auto modes = f.modes();
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const Mode kp = basis.mode(col);
    for (const auto& [d, c] : modes) {
      const auto row = basis.index(kp + d);
      if (row) m(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += c;
    }
  }
  return m;
}

CMatrix damped_operator(const HermitianOperator& h, const FourierField2D& a) {
  if (!a.is_real()) throw InvalidInput("damped_operator: damping must be real");
  if (a.max_abs_coeff() == 0.0) throw InvalidInput("damped_operator: damping is identically zero");
  const int g = std::max(64, 8 * a.bandwidth());
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      if (a.real_value(kTwoPi * i / g, kTwoPi * j / g) < -1e-12)
        throw InvalidInput("damped_operator: damping takes negative values");
    }
  return h.entries - kI * multiplication_operator(a, h.basis);
}

double spectral_abscissa(const CMatrix& h_eff) {
  const GeneralEigen ge = general_eigen(h_eff, false);
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ge.values.size(); ++i) alpha = std::min(alpha, -ge.values[i].imag());
  return alpha;
}

std::vector<double> damped_norms(const CMatrix& h_eff, const CVector& psi0,
                                 const std::vector<double>& times) {
  const GeneralEigen ge = general_eigen(h_eff, true);
  const Eigen::PartialPivLU<CMatrix> lu(ge.vectors);
  const CVector c0 = lu.solve(psi0);
  if ((ge.vectors * c0 - psi0).norm() > 1e-8 * psi0.norm())
    throw NumericalError("damped_norms: eigenvector basis is too ill-conditioned");
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    CVector c = c0;
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::exp(-kI * ge.values[i] * t);
    out.push_back((ge.vectors * c).norm());
  }
  return out;
}

double resolved_threshold(int n, int kg) {
  const double r = std::max(0, n - 4 * kg);
  return 0.25 * r * r;
}

}  // namespace magobs
