#include "magobs/obs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magobs/errors.hpp"
#include "magobs/linalg.hpp"
#include "magobs/parallel.hpp"

namespace magobs {

namespace {

// \int_a^b e^{i n s} ds
cplx interval_integral(int n, double a, double b) {
  if (n == 0) return b - a;
  return (std::polar(1.0, n * b) - std::polar(1.0, n * a)) / (kI * double(n));
}

}  // namespace

CMatrix region_mass_matrix(const Region& region, const ModeBasis& basis) {
  const int dx = 2 * basis.half_width_x();
  const int dy = 2 * basis.half_width_y();
  // Entries depend on d = k' - k only.
  const int wx = 2 * dx + 1;
  const int wy = 2 * dy + 1;
  std::vector<cplx> table(static_cast<std::size_t>(wx * wy));
  for (int d1 = -dx; d1 <= dx; ++d1)
    for (int d2 = -dy; d2 <= dy; ++d2) {
      cplx s{};
      for (const auto& r : region.pieces())
        s += interval_integral(d1, r.x0, r.x1) * interval_integral(d2, r.y0, r.y1);
      table[static_cast<std::size_t>((d1 + dx) * wy + (d2 + dy))] = s / (kTwoPi * kTwoPi);
    }
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Mode kp = basis.mode(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < n; ++i) {
      const Mode k = basis.mode(static_cast<std::size_t>(i));
      m(i, j) = table[static_cast<std::size_t>((kp.k1 - k.k1 + dx) * wy + (kp.k2 - k.k2 + dy))];
    }
  }
  return m;
}

cplx phase_integral(double lambda, double t) {
  const double x = 0.5 * lambda * t;
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return t * std::polar(1.0, x) * sinc;
}

CMatrix gramian_eigenbasis(const RVector& values, const CMatrix& m_tilde, double t) {
  if (!(t > 0.0)) throw InvalidInput("gramian: T must be positive");
  const Eigen::Index n = values.size();
  const double scale = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  CMatrix g(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      const double d = values[a] - values[b];
      g(a, b) = std::abs(d) < 1e-12 * scale ? t * m_tilde(a, b) : m_tilde(a, b) * phase_integral(d, t);
    }
  return g;
}

CMatrix gramian(const EigenDecomposition& eig, const CMatrix& m, double t) {
  const CMatrix m_tilde = eig.vectors.adjoint() * m * eig.vectors;
  const CMatrix g = eig.vectors * gramian_eigenbasis(eig.values, m_tilde, t) * eig.vectors.adjoint();
  return 0.5 * (g + g.adjoint());
}

namespace {

ObsReport report_from(double lambda_min, double t, std::size_t dim) {
  ObsReport r;
  r.t = t;
  r.lambda_min = lambda_min;
  r.c_obs = lambda_min > 0.0 ? 1.0 / lambda_min : std::numeric_limits<double>::infinity();
  r.dim = dim;
  r.rate = lambda_min / t;
  return r;
}

}  // namespace

ObsReport observability_constant(const CMatrix& g, const CMatrix& range) {
  if (range.cols() == 0) throw InvalidInput("observability_constant: empty subspace");
  const CMatrix c = range.adjoint() * g * range;
  const RVector w = hermitian_eigenvalues(0.5 * (c + c.adjoint()));
  ObsReport r = report_from(w[0], 0.0, static_cast<std::size_t>(range.cols()));
  r.rate = 0.0;
  return r;
}

std::vector<ObsReport> sharp_obs_experiment(const SharpObsInput& in) {
  if (!(in.t > 0.0)) throw InvalidInput("sharp_obs: T must be positive");
  const ModeBasis basis(in.n);
  const EigenDecomposition eig = eigendecompose(assemble(in.a, in.v, basis));
  const CMatrix m_tilde =
      eig.vectors.adjoint() * region_mass_matrix(in.region, basis) * eig.vectors;

  std::vector<ObsReport> out(in.h_list.size());
  parallel_for(in.h_list.size(), [&](std::size_t i) {
    const double h = in.h_list[i];
    const double t_eff = in.t * std::sqrt(h);
    const SpectralProjector p = spectral_projector(eig, {h, in.rho, ProjectorProfile::hard});
    ObsReport r;
    if (p.empty()) {
      r.t = t_eff;
      r.note = "empty projector range";
    } else {
      const auto k = static_cast<Eigen::Index>(p.selected.size());
      RVector vals(k);
      CMatrix mt(k, k);
      for (Eigen::Index a = 0; a < k; ++a) {
        vals[a] = eig.values[p.selected[static_cast<std::size_t>(a)]];
        for (Eigen::Index b = 0; b < k; ++b)
          mt(a, b) = m_tilde(p.selected[static_cast<std::size_t>(a)],
                             p.selected[static_cast<std::size_t>(b)]);
      }
      const CMatrix g = gramian_eigenbasis(vals, mt, t_eff);
      const RVector w = hermitian_eigenvalues(0.5 * (g + g.adjoint()));
      r = report_from(w[0], t_eff, static_cast<std::size_t>(k));
    }
    r.h = h;
    r.rho = in.rho;
    r.geometry = in.geometry;
    out[i] = r;
  });
  return out;
}

double resolvent_constant(const HermitianOperator& h, const CMatrix& m, double lambda) {
  const double w = 1.0 / std::pow(1.0 + std::pow(std::abs(lambda), 0.25), 2);
  CMatrix shifted = h.entries;
  shifted.diagonal().array() += lambda;
  const CMatrix k = w * (shifted.adjoint() * shifted) + m;
  const RVector ev = hermitian_eigenvalues(0.5 * (k + k.adjoint()));
  return 1.0 / std::sqrt(ev[0]);
}

ResolventScan resolvent_scan(const EigenDecomposition& eig, const CMatrix& m,
                             const std::vector<double>& lambdas) {
  const CMatrix m_tilde = eig.vectors.adjoint() * m * eig.vectors;
  ResolventScan scan;
  scan.lambdas = lambdas;
  scan.constants.resize(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    const double lambda = lambdas[i];
    const double w = 1.0 / std::pow(1.0 + std::pow(std::abs(lambda), 0.25), 2);
    CMatrix k = 0.5 * (m_tilde + m_tilde.adjoint());
    for (Eigen::Index j = 0; j < k.rows(); ++j) {
      const double s = eig.values[j] + lambda;
      k(j, j) += w * s * s;
    }
    scan.constants[i] = 1.0 / std::sqrt(hermitian_eigenvalues(k)[0]);
  });
  scan.max_constant = scan.constants.empty()
                          ? 0.0
                          : *std::max_element(scan.constants.begin(), scan.constants.end());
  return scan;
}

HumResult hum_control(const EigenDecomposition& eig, const CMatrix& m, double t,
                      const CVector& psi0, const CVector& psi1, double reg, int samples) {
  if (!(t > 0.0)) throw InvalidInput("hum_control: T must be positive");
  if (reg < 0.0) throw InvalidInput("hum_control: reg must be nonnegative");
  if (samples < 2) throw InvalidInput("hum_control: need at least two samples");
  const Eigen::Index n = eig.values.size();
  if (psi0.size() != n || psi1.size() != n) throw InvalidInput("hum_control: state size mismatch");

  const CMatrix& q = eig.vectors;
  const CMatrix m_tilde = q.adjoint() * m * q;
  // G'~[a,b] = M~[a,b] \int_0^T e^{-i s (l_a - l_b)} ds.
  const CMatrix gp = gramian_eigenbasis(-eig.values, m_tilde, t);
  const CMatrix gp_h = 0.5 * (gp + gp.adjoint());

  CVector free_c = q.adjoint() * psi0;
  for (Eigen::Index i = 0; i < n; ++i) free_c[i] *= std::polar(1.0, -eig.values[i] * t);
  const CVector d = q.adjoint() * psi1 - free_c;

  CMatrix reg_g = gp_h;
  reg_g.diagonal().array() += reg;
  const CVector phi = reg_g.ldlt().solve(d);

  HumResult out;
  out.gramian_lambda_min = hermitian_eigenvalues(gp_h)[0];
  const CVector final_c = free_c + gp_h * phi;
  out.final_state = q * final_c;
  out.error = (out.final_state - psi1).norm();
  const double target = psi1.norm();
  out.relative_error = target > 0.0 ? out.error / target : out.error;

  for (int j = 0; j < samples; ++j) {
    const double tj = t * j / (samples - 1);
    CVector c = phi;
    for (Eigen::Index i = 0; i < n; ++i) c[i] *= std::polar(1.0, eig.values[i] * (t - tj));
    out.times.push_back(tj);
    out.control.push_back(kI * (m * (q * c)));
  }
  return out;
}

}  // namespace magobs
