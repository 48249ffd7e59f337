#pragma once

#include <vector>

#include "thirdq/model.hpp"
#include "thirdq/types.hpp"

// Brute-force reference implementation on the 2ⁿ-dimensional Hilbert space; for verification only.
namespace thirdq::oracle {

// Jordan–Wigner Majoranas w_1..w_{2n}; site 0 is the leftmost tensor factor.
std::vector<CMatrix> dense_majoranas(int n);

// σ^axis on a 0-based site, axis ∈ {'x','y','z'}.
CMatrix pauli(int site, char axis, int n);

// Σ_jk w_j P_jk w_k.
CMatrix dense_quadratic(const std::vector<CMatrix>& w, const CMatrix& P);

// Σ_j v_j w_j.
CMatrix dense_linear(const std::vector<CMatrix>& w, const CVector& v);

struct DenseLiouvillean {
  CMatrix L;  // acts on column-major vec(ρ)
  int n = 0;
  std::vector<int> even_indices;

  int dim() const { return 1 << n; }
};

CVector vectorize(const CMatrix& rho);
CMatrix unvectorize(const CVector& v, int dim);

// Redfield models use the supplied bath vectors (computed by the spectra module when empty).
DenseLiouvillean dense_liouvillean(const QuadraticModel& model, const std::vector<CVector>& z_vectors = {});

CMatrix apply(const DenseLiouvillean& L, const CMatrix& rho);

// Kernel vector as a Hermitian unit-trace matrix.
CMatrix oracle_ness(const DenseLiouvillean& L);

std::vector<cplx> even_sector_spectrum(const DenseLiouvillean& L);

// Largest distance after greedy nearest-neighbour matching of two multisets; infinite on size mismatch.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

cplx oracle_expectation(const CMatrix& rho, const CMatrix& observable);

// Partial trace keeping the listed 0-based sites (in ascending order).
CMatrix oracle_reduced(const CMatrix& rho, const std::vector<int>& sites, int n);

CMatrix oracle_evolve(const DenseLiouvillean& L, const CMatrix& rho0, double t);

// exp(−βH_s)/Z.
CMatrix gibbs_state(const QuadraticHamiltonian& hamiltonian, double beta);

// Unnormalized exp(−βH_s).
CMatrix boltzmann_operator(const QuadraticHamiltonian& hamiltonian, double beta);

double von_neumann_entropy(const CMatrix& rho);

// ⟨w_j w_k⟩ from a dense state.
CMatrix two_point_of(const CMatrix& rho, int n);

}  // namespace thirdq::oracle
