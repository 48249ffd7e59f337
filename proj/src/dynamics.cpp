#include "thirdq/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "thirdq/errors.hpp"
#include "thirdq/linalg.hpp"

namespace thirdq {

namespace {

struct ModeRows {
  CMatrix plus;   // rows 2r of V
  CMatrix minus;  // rows 2r+1 of V
};

ModeRows mode_rows(const NormalModes& modes) {
  const CMatrix& V = modes.V;
  const Eigen::Index R = modes.rapidities.size();
  ModeRows out{CMatrix(R, V.cols()), CMatrix(R, V.cols())};
  for (Eigen::Index r = 0; r < R; ++r) {
    out.plus.row(r) = V.row(2 * r);
    out.minus.row(r) = V.row(2 * r + 1);
  }
  return out;
}

void require_unique(const NormalModes& modes) {
  const double min_re = modes.rapidities.real().minCoeff();
  if (min_re <= 1e-10) throw NonUniqueNESS("min Re beta = " + std::to_string(min_re));
}

}  // namespace

std::vector<cplx> dynamic_correlator(const NormalModes& modes, int j, int k, int l, int m, const std::vector<double>& times) {
  require_unique(modes);
  const Eigen::Index R = modes.rapidities.size();
  for (int idx : {j, k, l, m})
    if (idx < 0 || idx >= R) throw InvalidArgument("Majorana index out of range");
  for (double t : times)
    if (t < 0.0) throw InvalidArgument("times must be nonnegative");
  // X = w_l w_m ρ evolves like a state of trace T_lm whose two-point data follow from Wick's theorem.
  const CMatrix T = ness_two_point(modes).T;
  CMatrix f0(R, R);
  for (Eigen::Index a = 0; a < R; ++a)
    for (Eigen::Index b = 0; b < R; ++b) f0(a, b) = T(a, b) * T(l, m) - T(a, l) * T(b, m) + T(a, m) * T(b, l);
  const ModeRows rows = mode_rows(modes);
  const CMatrix g0 = rows.plus * adjoint_two_point(TwoPointMatrix{f0, RMatrix()}) * rows.plus.transpose();
  const CVector left = rows.minus.col(2 * j), right = rows.minus.col(2 * k);
  const cplx statics = T(l, m) * bilinear(left, rows.plus.col(2 * k));
  std::vector<cplx> out;
  out.reserve(times.size());
  for (double t : times) {
    cplx sum = 0.0;
    for (Eigen::Index r = 0; r < R; ++r)
      for (Eigen::Index s = 0; s < R; ++s)
        sum += left(r) * g0(r, s) * std::exp(-2.0 * t * (modes.rapidities(r) + modes.rapidities(s))) * right(s);
    out.push_back(2.0 * (statics + sum));
  }
  return out;
}

Propagator time_ordered_propagator(const DriveSchedule& schedule, bool with_log) {
  if (!schedule.sampler) throw InvalidArgument("drive schedule has no sampler");
  if (!(schedule.dt > 0.0) || schedule.t_final < 0.0) throw InvalidArgument("drive schedule needs dt > 0 and t_final >= 0");
  const int steps = std::max(1, static_cast<int>(std::ceil(schedule.t_final / schedule.dt - 1e-12)));
  const double h = schedule.t_final / steps;
  Propagator out;
  for (int i = 0; i < steps; ++i) {
    const double mid = (i + 0.5) * h;
    const StructureMatrix s = schedule.sampler(mid);
    if (out.U.size() == 0) out.U = CMatrix::Identity(s.A.rows(), s.A.cols());
    if (s.A.rows() != out.U.rows()) throw DimensionMismatch("structure matrix size changed along the schedule");
    if (linalg::max_abs(s.A + s.A.transpose()) > 1e-12 * std::max(1.0, linalg::max_abs(s.A)))
      throw InconsistentStructure("sampled A(t) is not antisymmetric at t=" + std::to_string(mid));
    const double size = 2.0 * linalg::spectral_norm(s.A) * h;
    if (size >= 0.5) throw StepTooLarge("||2A|| dt = " + std::to_string(size) + " at t=" + std::to_string(mid));
    out.U = linalg::expm(2.0 * h * s.A) * out.U;
    out.C0 += s.A0 * h;
  }
  if (with_log) out.C = half_log(out.U);
  return out;
}

CMatrix half_log(const CMatrix& U) {
  const linalg::EigenDecomposition ed = linalg::eig(U);
  CVector logs(ed.values.size());
  for (Eigen::Index i = 0; i < ed.values.size(); ++i) {
    const cplx mu = ed.values(i);
    if (std::abs(mu) == 0.0) throw BranchAmbiguity("propagator has a zero eigenvalue");
    if (std::abs(std::arg(mu)) > std::numbers::pi - 0.1)
      throw BranchAmbiguity("eigenvalue phase " + std::to_string(std::arg(mu)) + " is within 0.1 of the branch cut");
    logs(i) = std::log(mu);
  }
  const CMatrix& R = ed.vectors;
  return 0.5 * R * logs.asDiagonal() * R.partialPivLu().inverse();
}

CMatrix adjoint_two_point(const TwoPointMatrix& two_point) {
  const CMatrix& T = two_point.T;
  const Eigen::Index N = T.rows();
  CMatrix F(2 * N, 2 * N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index k = 0; k < N; ++k) {
      F(2 * j, 2 * k) = T(j, k) / 2.0;
      F(2 * j, 2 * k + 1) = -kI * T(k, j) / 2.0;
      F(2 * j + 1, 2 * k) = kI * T(j, k) / 2.0;
      F(2 * j + 1, 2 * k + 1) = T(k, j) / 2.0;
    }
  return F;
}

TwoPointMatrix two_point_from_adjoint(const CMatrix& F) {
  const Eigen::Index N = F.rows() / 2;
  CMatrix T(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index k = 0; k < N; ++k) T(j, k) = 2.0 * F(2 * j, 2 * k);
  return TwoPointMatrix::from_T(std::move(T));
}

TwoPointMatrix propagate_two_point(const NormalModes& modes, const TwoPointMatrix& initial, double t) {
  require_unique(modes);
  if (t < 0.0) throw InvalidArgument("t must be nonnegative");
  const Eigen::Index R = modes.rapidities.size();
  if (initial.T.rows() != R) throw DimensionMismatch("two-point matrix does not match the modes");
  const auto [plus, minus] = mode_rows(modes);
  // a = Σ_r (minus_r b_r + plus_r b'_r); ⟨1|b'_r = 0 and ⟨1|b_r b_s evolves as e^{−2t(β_r+β_s)}.
  const CMatrix F0 = adjoint_two_point(initial);
  CMatrix g = plus * F0 * plus.transpose();
  for (Eigen::Index r = 0; r < R; ++r)
    for (Eigen::Index s = 0; s < R; ++s) g(r, s) *= std::exp(-2.0 * t * (modes.rapidities(r) + modes.rapidities(s)));
  const CMatrix F = minus.transpose() * plus + minus.transpose() * g * minus;
  return two_point_from_adjoint(F);
}

TwoPointMatrix propagate_two_point(const Propagator& propagator, const TwoPointMatrix& initial) {
  const CMatrix F0 = adjoint_two_point(initial);
  if (F0.rows() != propagator.U.rows()) throw DimensionMismatch("propagator does not match the two-point matrix");
  // dF/dt = 2[A, F], so F(t) = U F0 U⁻¹ with U⁻¹ = Uᵀ in SO(4n, C).
  return two_point_from_adjoint(propagator.U * F0 * propagator.U.transpose());
}

}  // namespace thirdq
