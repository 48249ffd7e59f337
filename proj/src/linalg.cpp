#include "thirdq/linalg.hpp"

#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "thirdq/errors.hpp"

namespace thirdq::linalg {

EigenDecomposition eig(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("eig requires a square matrix");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  CMatrix work = a;
  EigenDecomposition out{CVector(n), CMatrix(n, n)};
  if (n == 0) return out;
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, out.values.data(), nullptr, 1,
                                        out.vectors.data(), n);
  if (info != 0) throw LapackFailure("zgeev returned info=" + std::to_string(info));
  return out;
}

CMatrix expm(const CMatrix& a) { return a.exp(); }

double spectral_norm(const CMatrix& a, int iterations) {
  if (a.size() == 0) return 0.0;
  CVector v(a.cols());
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = cplx(std::cos(0.7 * k + 0.3), std::sin(1.3 * k + 0.1));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    CVector w = a.adjoint() * (a * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    sigma = std::sqrt(norm);
    v = w / norm;
  }
  return sigma;
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace thirdq::linalg
