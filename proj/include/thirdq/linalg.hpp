#pragma once

#include "thirdq/types.hpp"

namespace thirdq::linalg {

struct EigenDecomposition {
  CVector values;
  CMatrix vectors;  // column k is the right eigenvector of values(k)
};

// General complex eigendecomposition (LAPACK zgeev).
EigenDecomposition eig(const CMatrix& a);

// Matrix exponential (Padé scaling and squaring).
CMatrix expm(const CMatrix& a);

// Largest singular value estimated by power iteration on a^† a.
double spectral_norm(const CMatrix& a, int iterations = 60);

double max_abs(const CMatrix& a);

}  // namespace thirdq::linalg
