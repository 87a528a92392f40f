#pragma once

#include <string>
#include <vector>

#include "magobs/geometry.hpp"
#include "magobs/spectral.hpp"

namespace magobs {

/// M[k,k'] = (2 pi)^-2 \int_omega e^{i (k' - k).z} dz, the Galerkin matrix of
/// the indicator of the region.
CMatrix region_mass_matrix(const Region& region, const ModeBasis& basis);

/// \int_0^T e^{i t lambda} dt, evaluated without cancellation.
cplx phase_integral(double lambda, double t);

/// Gramian in the eigenbasis: G~[a,b] = M~[a,b] \int_0^T e^{i (l_a - l_b) t} dt
/// with M~ = Q^* M Q already formed.
CMatrix gramian_eigenbasis(const RVector& values, const CMatrix& m_tilde, double t);

/// G = \int_0^T e^{itH} M e^{-itH} dt in the mode basis.
CMatrix gramian(const EigenDecomposition& eig, const CMatrix& m, double t);

struct ObsReport {
  double t = 0.0;
  double h = 0.0;
  double rho = 0.0;
  double lambda_min = 0.0;
  /// 1/lambda_min, infinite when lambda_min <= 0.
  double c_obs = 0.0;
  std::size_t dim = 0;
  /// lambda_min / t.
  double rate = 0.0;
  std::string geometry;
  std::string note;
};

/// Smallest eigenvalue of the Gramian compressed to the column span of
/// `range` (orthonormal columns).
ObsReport observability_constant(const CMatrix& g, const CMatrix& range);

struct SharpObsInput {
  VectorPotential a;
  FourierField2D v;
  Region region;
  int n = 20;
  double t = 1.0;
  std::vector<double> h_list;
  double rho = 0.3;
  std::string geometry;
};

/// For each h: Gramian over [0, T h^{1/2}] restricted to the range of the
/// hard projector Pi_{h,rho}; reports lambda_min/(T h^{1/2}). One
/// eigendecomposition serves the whole scan.
std::vector<ObsReport> sharp_obs_experiment(const SharpObsInput& in);

/// C(lambda) = lambda_min(K)^{-1/2},
///   K = (1 + |lambda|^{1/4})^{-2} (H + lambda)^2 + M.
double resolvent_constant(const HermitianOperator& h, const CMatrix& m, double lambda);

struct ResolventScan {
  std::vector<double> lambdas;
  std::vector<double> constants;
  double max_constant = 0.0;
};

/// Scan over a lambda grid, working in the eigenbasis of H so each point is
/// one eigenvalue-only solve.
ResolventScan resolvent_scan(const EigenDecomposition& eig, const CMatrix& m,
                             const std::vector<double>& lambdas);

struct HumResult {
  std::vector<double> times;
  /// Forcing 1_omega h(t) = i M e^{i(T-t)H} phi at each sample time.
  std::vector<CVector> control;
  CVector final_state;
  double error = 0.0;
  /// error / ||psi1||.
  double relative_error = 0.0;
  double gramian_lambda_min = 0.0;
};

/// HUM steering of psi0 to psi1 in time T with Tikhonov shift reg:
///   d = psi1 - e^{-iTH} psi0,  G' = \int_0^T e^{-isH} M e^{isH} ds,
///   phi = (G' + reg)^{-1} d,    psi(T) = e^{-iTH} psi0 + G' phi.
HumResult hum_control(const EigenDecomposition& eig, const CMatrix& m, double t,
                      const CVector& psi0, const CVector& psi1, double reg, int samples = 11);

}  // namespace magobs
