#include "thirdq/model.hpp"

#include <cmath>
#include <string>

#include "thirdq/errors.hpp"

namespace thirdq {

namespace {

// Adds coefficient c of w_a w_b (1-based, a < b) split antisymmetrically.
void add_pair(CMatrix& H, int a, int b, cplx c) {
  H(a - 1, b - 1) += c / 2.0;
  H(b - 1, a - 1) -= c / 2.0;
}

}  // namespace

QuadraticHamiltonian build_xy_hamiltonian(const ChainParams& params) {
  if (params.n < 1) throw InvalidArgument("build_xy_hamiltonian requires n >= 1, got " + std::to_string(params.n));
  const int n = params.n;
  const double g = params.gamma;
  CMatrix H = CMatrix::Zero(2 * n, 2 * n);
  for (int j = 1; j < n; ++j) {
    // σˣσˣ = −i w_{2j} w_{2j+1},  σʸσʸ = i w_{2j−1} w_{2j+2}
    add_pair(H, 2 * j, 2 * j + 1, -kI * (1.0 + g) / 2.0);
    add_pair(H, 2 * j - 1, 2 * j + 2, kI * (1.0 - g) / 2.0);
  }
  for (int j = 1; j <= n; ++j) add_pair(H, 2 * j - 1, 2 * j, -kI * params.h);  // σᶻ = −i w_{2j−1} w_{2j}
  return {std::move(H)};
}

std::array<CouplingOperator, 4> build_xy_couplings(const std::array<double, 4>& kappas,
                                                   const std::array<double, 4>& thetas, int n) {
  if (n < 2) throw InvalidArgument("build_xy_couplings requires n >= 2, got " + std::to_string(n));
  std::array<CouplingOperator, 4> out;
  for (int mu = 0; mu < 4; ++mu) {
    CVector x = CVector::Zero(2 * n);
    const double k = kappas[mu];
    const double t = thetas[mu];
    if (mu < 2) {
      x(0) = k * std::cos(t);
      x(1) = k * std::sin(t);
    } else {
      x(2 * n - 2) = -k * std::sin(t);
      x(2 * n - 1) = k * std::cos(t);
    }
    out[mu] = {std::move(x), mu < 2 ? 0 : 1};
  }
  return out;
}

double ohmic_spectral_function(double omega, double beta, double lambda) {
  if (!(beta > 0.0)) throw InvalidArgument("ohmic_spectral_function requires beta > 0");
  const double l2 = lambda * lambda;
  if (omega == 0.0) return l2 / beta;
  const double x = beta * omega;
  if (omega > 0.0) return l2 * omega / std::expm1(x);
  // ω < 0: λ²|ω|/(1 − e^{−β|ω|}), no exponent overflow.
  return l2 * (-omega) / (-std::expm1(x));
}

double ohmic_spectral_function_boosted(double omega, double beta, double lambda) {
  return ohmic_spectral_function(-omega, beta, lambda);
}

CVector lowering_operator_vector(int site, int n) {
  if (n < 1 || (site != 1 && site != n)) throw InvalidArgument("lowering_operator_vector supports the end sites only");
  CVector l = CVector::Zero(2 * n);
  if (site == 1) {
    l(0) = 0.5;
    l(1) = -0.5 * kI;
  } else {
    l(2 * n - 2) = 0.5 * kI;
    l(2 * n - 1) = 0.5;
  }
  return l;
}

QuadraticModel xy_redfield_model(const ChainParams& params, const XYRedfieldParams& bath) {
  QuadraticModel model;
  model.hamiltonian = build_xy_hamiltonian(params);
  const auto couplings = build_xy_couplings(bath.coupling.kappa, bath.coupling.theta, params.n);
  model.couplings.assign(couplings.begin(), couplings.end());
  model.dissipation = RedfieldBaths{{RedfieldOhmic{bath.beta_left, bath.lambda}, RedfieldOhmic{bath.beta_right, bath.lambda}}};
  return model;
}

QuadraticModel xy_lindblad_model(const ChainParams& params, const XYLindbladParams& rates) {
  const int n = params.n;
  if (n < 2) throw InvalidArgument("xy_lindblad_model requires n >= 2");
  for (double r : {rates.gamma_left_1, rates.gamma_left_2, rates.gamma_right_1, rates.gamma_right_2})
    if (r < 0.0) throw InvalidArgument("Lindblad rates must be nonnegative");
  const CVector lower_left = lowering_operator_vector(1, n);
  const CVector lower_right = lowering_operator_vector(n, n);
  // σ⁺ differs from σ⁻ by the sign of the σʸ component.
  CVector raise_left = lower_left;
  raise_left(1) = -raise_left(1);
  CVector raise_right = lower_right;
  raise_right(2 * n - 2) = -raise_right(2 * n - 2);

  QuadraticModel model;
  model.hamiltonian = build_xy_hamiltonian(params);
  model.dissipation = LindbladOperators{{std::sqrt(rates.gamma_left_1) * lower_left, std::sqrt(rates.gamma_left_2) * raise_left,
                                         std::sqrt(rates.gamma_right_1) * lower_right,
                                         std::sqrt(rates.gamma_right_2) * raise_right}};
  return model;
}

QuadraticModel xy_lindblad_model_rates(const ChainParams& params, const XYLindbladParams& rates) {
  const int n = params.n;
  const QuadraticModel direct = xy_lindblad_model(params, rates);
  const auto& ops = std::get<LindbladOperators>(direct.dissipation).l;

  QuadraticModel model;
  model.hamiltonian = direct.hamiltonian;
  const int support[4] = {0, 1, 2 * n - 2, 2 * n - 1};
  for (int mu = 0; mu < 4; ++mu) {
    CVector x = CVector::Zero(2 * n);
    x(support[mu]) = 1.0;
    model.couplings.push_back({std::move(x), mu < 2 ? 0 : 1});
  }
  // L = Σ_μ a_μ X_μ contributes γ_{νμ} += a_ν* a_μ.
  CMatrix gamma = CMatrix::Zero(4, 4);
  for (const CVector& l : ops) {
    CVector a(4);
    for (int mu = 0; mu < 4; ++mu) a(mu) = l(support[mu]);
    gamma += a.conjugate() * a.transpose();
  }
  model.dissipation = LindbladRates{std::move(gamma)};
  return model;
}

}  // namespace thirdq
