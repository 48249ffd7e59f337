#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thirdq/model.hpp"
#include "thirdq/types.hpp"

namespace thirdq {

// Positive half of the spectrum of H: H u_m = ε_m u_m, u_l·u_m = 0, u_l·u_m* = δ_lm.
struct HamiltonianEigensystem {
  RVector epsilons;  // ascending, nonnegative
  CMatrix modes;     // column m is u_m
};

struct BathMatrix {
  CMatrix M;
  double trace_term = 0.0;  // tr M + tr M*
};

// Liouvillean L = a·A a − A0 on the even operator sector.
struct StructureMatrix {
  CMatrix A;
  double A0 = 0.0;

  int modes() const { return static_cast<int>(A.rows()) / 4; }
};

// Rows 2j, 2j+1 (0-based) are the eigenvectors of A for +β_j and −β_j, with V Vᵀ = J.
struct NormalModes {
  CVector rapidities;
  CMatrix V;
  double condition_estimate = 1.0;
  bool zero_rapidity = false;
  std::vector<std::string> warnings;

  int modes() const { return static_cast<int>(V.rows()) / 4; }
};

HamiltonianEigensystem hamiltonian_eigensystem(const QuadraticHamiltonian& hamiltonian);

CVector bath_vector(int nu, const HamiltonianEigensystem& eigensystem, const std::vector<CouplingOperator>& couplings,
                    const RedfieldBaths& baths);

std::vector<CVector> bath_vectors(const HamiltonianEigensystem& eigensystem,
                                  const std::vector<CouplingOperator>& couplings, const RedfieldBaths& baths);

BathMatrix bath_matrix(const std::vector<CouplingOperator>& couplings, const std::vector<CVector>& z_vectors);
BathMatrix bath_matrix(const std::vector<CouplingOperator>& couplings, const LindbladRates& rates);
BathMatrix bath_matrix(const LindbladOperators& operators, int modes);

// Dispatches on the model's dissipation; computes the Hamiltonian eigensystem when needed.
BathMatrix bath_matrix(const QuadraticModel& model);

StructureMatrix assemble_structure_matrix(const QuadraticHamiltonian& hamiltonian, const BathMatrix& bath);
StructureMatrix structure_matrix(const QuadraticModel& model);

NormalModes normal_modes(const StructureMatrix& structure);

// J of the normalization V Vᵀ = J: ones on the (2j, 2j+1) pairs.
CMatrix symplectic_unit(int modes);

double spectral_gap(const NormalModes& modes);

// −2 ν·β for each selector ν ∈ {0,1}^{2n}.
std::vector<cplx> liouvillean_eigenvalues(const NormalModes& modes, const std::vector<std::vector<int>>& selectors);

// All even-weight selectors of length 2n for n sites; refuses n > 8.
std::vector<std::vector<int>> even_selectors(int n);

// ω(q) of the periodic XY chain.
double xy_dispersion(double q, double gamma, double h);

// Nontrivial stationary point q* ∈ (0, π) of ω(q), present only for |h| < |1 − γ²|.
std::optional<double> xy_stationary_point(double gamma, double h);

}  // namespace thirdq
