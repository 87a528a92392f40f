#include "magobs/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "magobs/errors.hpp"

namespace magobs {

// QR-based zheev. The zheevd shipped with the system OpenBLAS returns
// non-orthogonal eigenvectors for n >= ~600, and zheevr loses orthogonality
// to ~1e-12 on clustered spectra.
HermitianEigen hermitian_eigen(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("hermitian_eigen: matrix is not square");
  HermitianEigen out{RVector(a.rows()), a};
  if (a.rows() == 0) return out;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  const lapack_int info =
      LAPACKE_zheev(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data());
  if (info != 0) throw NumericalError("zheev failed with info " + std::to_string(info));
  return out;
}

RVector hermitian_eigenvalues(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("hermitian_eigenvalues: matrix is not square");
  CMatrix work = a;
  RVector w(a.rows());
  if (a.rows() == 0) return w;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  const lapack_int info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0) throw NumericalError("zheev failed with info " + std::to_string(info));
  return w;
}

GeneralEigen general_eigen(const CMatrix& a, bool want_vectors) {
  if (a.rows() != a.cols()) throw InvalidInput("general_eigen: matrix is not square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  CMatrix work = a;
  GeneralEigen out{CVector(n), want_vectors ? CMatrix(n, n) : CMatrix(1, 1)};
  if (n == 0) return out;
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, work.data(), n,
                    out.values.data(), nullptr, 1, out.vectors.data(), want_vectors ? n : 1);
  if (info != 0) throw NumericalError("zgeev failed with info " + std::to_string(info));
  return out;
}

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("expm: matrix is not square");
  return a.exp();
}

double hermitian_defect(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace magobs
