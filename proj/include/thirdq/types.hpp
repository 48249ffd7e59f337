#pragma once

#include <complex>

#include <Eigen/Dense>

namespace thirdq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Plain bilinear product a·b without conjugation.
inline cplx bilinear(const CVector& a, const CVector& b) { return (a.array() * b.array()).sum(); }

}  // namespace thirdq
