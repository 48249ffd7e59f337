#pragma once

#include <vector>

#include "thirdq/model.hpp"
#include "thirdq/spectra.hpp"
#include "thirdq/types.hpp"

namespace thirdq {

// T_jk = ⟨w_j w_k⟩ = δ_jk + i B_jk.
struct TwoPointMatrix {
  CMatrix T;
  RMatrix B;

  static TwoPointMatrix from_T(CMatrix T);
  int modes() const { return static_cast<int>(T.rows()) / 2; }
};

TwoPointMatrix ness_two_point(const NormalModes& modes);

struct GreenQuadrature {
  double omega_max = 0.0;  // Ω; nonpositive selects 10³ times the spectral-radius bound of A
  double tolerance = 1e-7;
  int max_evaluations = 200000;
};

struct GreenResult {
  TwoPointMatrix two_point;
  double error_estimate = 0.0;
  int evaluations = 0;
};

// −(1/π)∫ (A − iω)⁻¹ dω over odd indices, by adaptive Gauss–Kronrod with an analytic tail.
GreenResult ness_two_point_green(const StructureMatrix& structure, const GreenQuadrature& quadrature = {});

// Σ_jk P_jk T_jk = ⟨w·P w⟩.
cplx quadratic_expectation(const TwoPointMatrix& two_point, const CMatrix& P);

// Ĉ with [w·Pw, w·Rw] = w·Ĉw.
CMatrix commutator_quadratic(const CMatrix& P, const CMatrix& R);

// Majorana coefficient matrix of σᶻ_site (0-based site).
CMatrix sigma_z_matrix(int site, int n);

// Ĥ_m for bonds m = 0..n−2 (0-based), uniform field.
std::vector<CMatrix> energy_density_matrices(const ChainParams& params);

// i·commutator(Ĥ_m, Ĥ_{m+1}), m = 0..n−3.
std::vector<CMatrix> heat_current_matrices(const ChainParams& params);

std::vector<double> heat_current_profile(const TwoPointMatrix& two_point, const ChainParams& params);
std::vector<double> energy_profile(const TwoPointMatrix& two_point, const ChainParams& params);
std::vector<double> magnetization_profile(const TwoPointMatrix& two_point);

// Connected ⟨σᶻ_l σᶻ_m⟩ (0-based sites).
double spin_spin_correlator(const TwoPointMatrix& two_point, int l, int m);
RMatrix spin_correlation_matrix(const TwoPointMatrix& two_point);

double residual_correlator(const RMatrix& C);

// C(r) = mean of C_{i,i+r}, r = 0..n−1.
std::vector<double> correlation_decay(const RMatrix& C);

struct BlockEntropy {
  double entropy = 0.0;
  double positivity_excess = 0.0;  // max(ν − 1, 0) before clamping
};

double binary_entropy(double x);

// Sites are 0-based.
BlockEntropy block_entropy(const TwoPointMatrix& two_point, const std::vector<int>& sites);

struct MutualInformation {
  double qmi = 0.0;
  double left = 0.0;
  double right = 0.0;
  double total = 0.0;
  double positivity_excess = 0.0;
};

MutualInformation quantum_mutual_information(const TwoPointMatrix& two_point);

// f(m) = |⟨H_m⟩ − H̄|/|H̄| with H̄ the mean over bonds 1..n−3 (0-based).
std::vector<double> energy_fluctuation_profile(const TwoPointMatrix& two_point, const ChainParams& params);

struct ObservableReport {
  int n = 0;
  std::vector<double> magnetization;
  RMatrix correlations;
  double residual_correlation = 0.0;
  std::vector<double> correlation_decay;
  std::vector<double> heat_current;
  std::vector<double> energy_density;
  std::vector<double> energy_fluctuation;  // empty when the bulk mean energy vanishes
  double entropy_left = 0.0;
  double entropy_right = 0.0;
  double entropy_total = 0.0;
  double mutual_information = 0.0;
  double positivity_excess = 0.0;
};

ObservableReport observable_report(const TwoPointMatrix& two_point, const ChainParams& params);

// Bulk statistics of the current over bonds 1..n−4 (0-based): mean and relative standard deviation.
struct CurrentStatistics {
  double mean = 0.0;
  double relative_stddev = 0.0;
};

CurrentStatistics bulk_current(const std::vector<double>& profile);

}  // namespace thirdq
