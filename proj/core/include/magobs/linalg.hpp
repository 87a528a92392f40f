#pragma once

#include "magobs/basis.hpp"

namespace magobs {

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

/// Eigenpairs of a general complex matrix (right eigenvectors).
struct GeneralEigen {
  CVector values;
  CMatrix vectors;
};

/// LAPACK zheev on the lower triangle. Throws NumericalError on failure.
HermitianEigen hermitian_eigen(const CMatrix& a);
RVector hermitian_eigenvalues(const CMatrix& a);

/// LAPACK zgeev.
GeneralEigen general_eigen(const CMatrix& a, bool want_vectors = true);

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant.
CMatrix expm(const CMatrix& a);

/// max |A - A^H| entry.
double hermitian_defect(const CMatrix& a);

}  // namespace magobs
