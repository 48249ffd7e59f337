#pragma once

#include <functional>
#include <vector>

#include "thirdq/ness.hpp"
#include "thirdq/spectra.hpp"
#include "thirdq/types.hpp"

namespace thirdq {

struct DriveSchedule {
  std::function<StructureMatrix(double)> sampler;  // t ↦ (A(t), A0(t))
  double t_final = 0.0;
  double dt = 0.0;  // upper bound; the horizon is split into equal steps no longer than dt
};

struct Propagator {
  CMatrix U;
  CMatrix C;  // ½ ln U, principal branch; empty when not requested
  double C0 = 0.0;
};

// ⟨w_j(t) w_k(t) w_l w_m⟩_NESS for each t, 0-based Majorana indices.
std::vector<cplx> dynamic_correlator(const NormalModes& modes, int j, int k, int l, int m, const std::vector<double>& times);

// Ordered midpoint product of exp(2A(t)Δt); ln U is taken when with_log is set.
Propagator time_ordered_propagator(const DriveSchedule& schedule, bool with_log = true);

// ½ ln U via eigendecomposition; throws BranchAmbiguity near the branch cut.
CMatrix half_log(const CMatrix& U);

// ⟨1| a_p a_q |ρ⟩ for a Gaussian even state, 4n×4n, 0-based.
CMatrix adjoint_two_point(const TwoPointMatrix& two_point);
TwoPointMatrix two_point_from_adjoint(const CMatrix& F);

// Evolution under the static Liouvillean through the normal-mode representation.
TwoPointMatrix propagate_two_point(const NormalModes& modes, const TwoPointMatrix& initial, double t);

// Evolution by an SO(4n, C) propagator U = T exp(2∫A).
TwoPointMatrix propagate_two_point(const Propagator& propagator, const TwoPointMatrix& initial);

}  // namespace thirdq
