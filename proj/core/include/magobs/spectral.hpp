#pragma once

#include <vector>

#include "magobs/basis.hpp"
#include "magobs/fields.hpp"

namespace magobs {

/// Dense Galerkin matrix of a Hermitian operator on a mode basis.
struct HermitianOperator {
  ModeBasis basis;
  CMatrix entries;

  Eigen::Index dim() const { return entries.rows(); }
};

/// Eigenpairs of a HermitianOperator, eigenvalues ascending. Each
/// eigenvector's largest component is made real positive so the output is
/// reproducible.
struct EigenDecomposition {
  ModeBasis basis;
  RVector values;
  CMatrix vectors;
};

/// Galerkin matrix of H_{A,V} = (D - A)^2 + V on the basis:
///   H[k,k'] = |k'|^2 delta - (k + k').A^(k - k') + W^(k - k'),  W = |A|^2 + V.
/// Throws TruncationError when a half-width is below twice the field
/// bandwidth in that direction; the reported mass is the coefficient energy
/// of A1, A2, W beyond half the window.
HermitianOperator assemble(const VectorPotential& a, const FourierField2D& v,
                           const ModeBasis& basis);

EigenDecomposition eigendecompose(const HermitianOperator& h);

/// Q e^{-i Lambda t} Q^* state.
ModeVector propagate(const EigenDecomposition& eig, const ModeVector& state, double t);

/// <H u, u> / <u, u> computed in the eigenbasis.
double energy(const EigenDecomposition& eig, const ModeVector& state);

enum class ProjectorProfile { hard, smooth };

struct ProjectorSpec {
  double h = 0.25;
  double rho = 0.3;
  ProjectorProfile profile = ProjectorProfile::hard;
};

struct SpectralProjector {
  CMatrix matrix;
  /// Eigenvectors with nonzero weight, as columns.
  CMatrix range;
  std::vector<Eigen::Index> selected;
  RVector weights;

  bool empty() const { return selected.empty(); }
};

/// Profile chi with chi = 1 on |t| <= 1/4, supported in |t| < 1.
double projector_profile(double t);

/// Pi_{h,rho} = chi((h^2 H - 1)/rho). The hard profile is the indicator of
/// |h^2 lambda - 1| <= rho.
SpectralProjector spectral_projector(const EigenDecomposition& eig, const ProjectorSpec& spec);

/// One-dimensional blocks H_k = (k - A1(y))^2 + (D_y - A2(y))^2 + V(y) over
/// y-modes |n| <= m, one per x-frequency k. The blocks live on
/// ModeBasis({k, 0}, 0, m), matching the k-th x-mode of the 2D assembly.
std::vector<HermitianOperator> separable_blocks(const CircleFunction& a1, const CircleFunction& a2,
                                                const CircleFunction& v,
                                                const std::vector<int>& k_list, int m);
/// Same from 2D fields; rejects x-dependent data.
std::vector<HermitianOperator> separable_blocks(const VectorPotential& a, const FourierField2D& v,
                                                const std::vector<int>& k_list, int m);

/// Matrix of multiplication by f: M[k,k'] = f^(k - k').
CMatrix multiplication_operator(const FourierField2D& f, const ModeBasis& basis);

/// H - i a, after checking a >= 0 on a sample grid and a not identically 0.
CMatrix damped_operator(const HermitianOperator& h, const FourierField2D& a);

/// min over eigenvalues of -Im(lambda).
double spectral_abscissa(const CMatrix& h_eff);

/// ||e^{-i t H_eff} psi0|| at the requested times, through the
/// eigendecomposition of H_eff.
std::vector<double> damped_norms(const CMatrix& h_eff, const CVector& psi0,
                                 const std::vector<double>& times);

/// Eigenvalues below this bound are trusted after gauge multiplication by a
/// field of bandwidth kg on a basis of bandwidth n: (n - 4 kg)^2 / 4.
double resolved_threshold(int n, int kg);

}  // namespace magobs
