#pragma once

#include <array>
#include <numbers>
#include <variant>
#include <vector>

#include "thirdq/types.hpp"

namespace thirdq {

struct ChainParams {
  int n = 2;
  double gamma = 0.5;
  double h = 0.9;

  double critical_field() const { return std::abs(1.0 - gamma * gamma); }
};

// H_s = Σ w_j H_jk w_k with H antisymmetric and purely imaginary.
struct QuadraticHamiltonian {
  CMatrix H;

  int dim() const { return static_cast<int>(H.rows()); }
  int modes() const { return dim() / 2; }
};

// X = x·w, attached to bath bath_id.
struct CouplingOperator {
  CVector x;
  int bath_id = 0;
};

struct RedfieldOhmic {
  double beta = 1.0;
  double lambda = 0.1;
};

// Delta-correlated bath Γ(t) = rate·δ(t+0): flat spectral function, no detailed balance.
struct WhiteNoise {
  double rate = 0.0;
};

using RedfieldBath = std::variant<RedfieldOhmic, WhiteNoise>;

// Redfield baths indexed by bath_id; distinct ids are uncorrelated.
struct RedfieldBaths {
  std::vector<RedfieldBath> baths;
};

// Lindblad form (a): Hermitian couplings with a Hermitian PSD rate matrix over coupling indices.
struct LindbladRates {
  CMatrix gamma;
};

// Lindblad form (b): L_μ = l_μ·w, dissipator Σ 2LρL† − {L†L, ρ}.
struct LindbladOperators {
  std::vector<CVector> l;
};

using Dissipation = std::variant<RedfieldBaths, LindbladRates, LindbladOperators>;

struct QuadraticModel {
  QuadraticHamiltonian hamiltonian;
  std::vector<CouplingOperator> couplings;
  Dissipation dissipation;

  int modes() const { return hamiltonian.modes(); }
};

struct XYCouplingParams {
  std::array<double, 4> kappa{1.0, 0.0, 1.0, 0.0};
  std::array<double, 4> theta{std::numbers::pi / 6, 0.0, std::numbers::pi / 6, 0.0};
};

struct XYRedfieldParams {
  double beta_left = 0.3;
  double beta_right = 5.2;
  double lambda = 0.1;
  XYCouplingParams coupling;
};

// Rates of σ⁻/σ⁺ jump operators on the first (L) and last (R) spin.
struct XYLindbladParams {
  double gamma_left_1 = 0.5;
  double gamma_left_2 = 0.3;
  double gamma_right_1 = 0.5;
  double gamma_right_2 = 0.1;
};

QuadraticHamiltonian build_xy_hamiltonian(const ChainParams& params);

std::array<CouplingOperator, 4> build_xy_couplings(const std::array<double, 4>& kappas,
                                                   const std::array<double, 4>& thetas, int n);

// λ²ω/(e^{βω}−1), evaluated without overflow; equals λ²/β at ω = 0.
double ohmic_spectral_function(double omega, double beta, double lambda);

// e^{βω}·Γ̃(ω) = λ²ω/(1−e^{−βω}), i.e. Γ̃(−ω).
double ohmic_spectral_function_boosted(double omega, double beta, double lambda);

// Majorana vector of σ⁻_1 (site = 1) or σ⁻_n (site = n), dropping the string operator at the right end.
CVector lowering_operator_vector(int site, int n);

QuadraticModel xy_redfield_model(const ChainParams& params, const XYRedfieldParams& bath);

// σ⁻/σ⁺ jump operators in form (b): √Γ₁ σ⁻_1, √Γ₂ σ⁺_1, √Γ₁ᴿ σ⁻_n, √Γ₂ᴿ σ⁺_n.
QuadraticModel xy_lindblad_model(const ChainParams& params, const XYLindbladParams& rates);

// Same physics as xy_lindblad_model, expressed in form (a) with σˣ,σʸ couplings and a 4×4 rate matrix.
QuadraticModel xy_lindblad_model_rates(const ChainParams& params, const XYLindbladParams& rates);

}  // namespace thirdq
