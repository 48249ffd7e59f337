#include "thirdq/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "thirdq/errors.hpp"
#include "thirdq/linalg.hpp"
#include "thirdq/spectra.hpp"

namespace thirdq::oracle {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix single(char axis) {
  CMatrix s = CMatrix::Zero(2, 2);
  switch (axis) {
    case 'x': s << 0, 1, 1, 0; break;
    case 'y': s << 0, -kI, kI, 0; break;
    case 'z': s << 1, 0, 0, -1; break;
    default: s = CMatrix::Identity(2, 2);
  }
  return s;
}

void require_sites(int n, int limit) {
  if (n < 1 || n > limit) throw InvalidArgument("oracle supports 1 <= n <= " + std::to_string(limit));
}

}  // namespace

CMatrix pauli(int site, char axis, int n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) out = kron(out, s == site ? single(axis) : CMatrix::Identity(2, 2));
  return out;
}

std::vector<CMatrix> dense_majoranas(int n) {
  require_sites(n, 6);
  std::vector<CMatrix> w;
  CMatrix string = CMatrix::Identity(1 << n, 1 << n);
  for (int m = 0; m < n; ++m) {
    w.push_back(pauli(m, 'x', n) * string);
    w.push_back(pauli(m, 'y', n) * string);
    string = string * pauli(m, 'z', n);
  }
  return w;
}

CMatrix dense_quadratic(const std::vector<CMatrix>& w, const CMatrix& P) {
  CMatrix out = CMatrix::Zero(w.front().rows(), w.front().cols());
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t k = 0; k < w.size(); ++k)
      if (P(j, k) != 0.0) out += P(j, k) * w[j] * w[k];
  return out;
}

CMatrix dense_linear(const std::vector<CMatrix>& w, const CVector& v) {
  CMatrix out = CMatrix::Zero(w.front().rows(), w.front().cols());
  for (std::size_t j = 0; j < w.size(); ++j) out += v(static_cast<Eigen::Index>(j)) * w[j];
  return out;
}

CVector vectorize(const CMatrix& rho) { return Eigen::Map<const CVector>(rho.data(), rho.size()); }

CMatrix unvectorize(const CVector& v, int dim) { return Eigen::Map<const CMatrix>(v.data(), dim, dim); }

DenseLiouvillean dense_liouvillean(const QuadraticModel& model, const std::vector<CVector>& z_vectors) {
  const int n = model.modes();
  require_sites(n, 4);
  const auto w = dense_majoranas(n);
  const int d = 1 << n;
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix Hs = dense_quadratic(w, model.hamiltonian.H);
  // vec(AρB) = (Bᵀ ⊗ A) vec ρ
  CMatrix L = -kI * (kron(id, Hs) - kron(Hs.transpose(), id));

  auto add_commutator_pair = [&](const CMatrix& Z, const CMatrix& X) {
    // [Zρ, X] + h.c. = ZρX − XZρ + X†ρZ† − ρZ†X†
    const CMatrix Zd = Z.adjoint(), Xd = X.adjoint();
    L += kron(X.transpose(), Z) - kron(id, X * Z) + kron(Zd.transpose(), Xd) - kron((Zd * Xd).transpose(), id);
  };

  if (const auto* baths = std::get_if<RedfieldBaths>(&model.dissipation)) {
    std::vector<CVector> zs = z_vectors;
    if (zs.empty()) zs = bath_vectors(hamiltonian_eigensystem(model.hamiltonian), model.couplings, *baths);
    if (zs.size() != model.couplings.size()) throw DimensionMismatch("one bath vector per coupling required");
    for (std::size_t nu = 0; nu < zs.size(); ++nu)
      add_commutator_pair(dense_linear(w, zs[nu]), dense_linear(w, model.couplings[nu].x));
  } else if (const auto* rates = std::get_if<LindbladRates>(&model.dissipation)) {
    // Σ γ_{νμ} [X_μ ρ, X_ν] + h.c.
    for (std::size_t nu = 0; nu < model.couplings.size(); ++nu) {
      CMatrix Z = CMatrix::Zero(d, d);
      for (std::size_t mu = 0; mu < model.couplings.size(); ++mu)
        Z += rates->gamma(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(mu)) * dense_linear(w, model.couplings[mu].x);
      add_commutator_pair(Z, dense_linear(w, model.couplings[nu].x));
    }
  } else {
    // Σ 2LρL† − L†Lρ − ρL†L
    for (const CVector& l : std::get<LindbladOperators>(model.dissipation).l) {
      const CMatrix Lop = dense_linear(w, l);
      const CMatrix LdL = Lop.adjoint() * Lop;
      L += 2.0 * kron(Lop.conjugate(), Lop) - kron(id, LdL) - kron(LdL.transpose(), id);
    }
  }

  DenseLiouvillean out{std::move(L), n, {}};
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      if ((std::popcount(static_cast<unsigned>(i)) + std::popcount(static_cast<unsigned>(j))) % 2 == 0)
        out.even_indices.push_back(i + j * d);
  return out;
}

CMatrix apply(const DenseLiouvillean& L, const CMatrix& rho) { return unvectorize(L.L * vectorize(rho), L.dim()); }

CMatrix oracle_ness(const DenseLiouvillean& L) {
  Eigen::BDCSVD<CMatrix> svd(L.L, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Eigen::Index last = s.size() - 1;
  if (s(last - 1) - s(last) < 1e-8)
    throw DegenerateKernel("two smallest singular values " + std::to_string(s(last - 1)) + ", " + std::to_string(s(last)));
  CMatrix rho = unvectorize(svd.matrixV().col(last), L.dim());
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho / rho.trace();
}

std::vector<cplx> even_sector_spectrum(const DenseLiouvillean& L) {
  const auto m = static_cast<Eigen::Index>(L.even_indices.size());
  CMatrix sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = L.L(L.even_indices[a], L.even_indices[b]);
  const CVector values = linalg::eig(sub).values;
  return {values.data(), values.data() + values.size()};
}

double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

cplx oracle_expectation(const CMatrix& rho, const CMatrix& observable) {
  if (rho.rows() != observable.rows() || rho.cols() != observable.cols()) throw DimensionMismatch("operator sizes differ");
  return (rho * observable).trace();
}

CMatrix oracle_reduced(const CMatrix& rho, const std::vector<int>& sites, int n) {
  if (rho.rows() != (1 << n)) throw DimensionMismatch("state dimension does not match n");
  std::vector<bool> keep(n, false);
  for (int s : sites) {
    if (s < 0 || s >= n) throw InvalidArgument("site out of range");
    keep[s] = true;
  }
  const int k = static_cast<int>(sites.size());
  CMatrix out = CMatrix::Zero(1 << k, 1 << k);
  auto split = [&](int state, int& kept, int& traced) {
    kept = traced = 0;
    for (int s = 0; s < n; ++s) {
      const int bit = (state >> (n - 1 - s)) & 1;
      if (keep[s])
        kept = (kept << 1) | bit;
      else
        traced = (traced << 1) | bit;
    }
  };
  for (int i = 0; i < (1 << n); ++i)
    for (int j = 0; j < (1 << n); ++j) {
      int ki, ti, kj, tj;
      split(i, ki, ti);
      split(j, kj, tj);
      if (ti == tj) out(ki, kj) += rho(i, j);
    }
  return out;
}

CMatrix oracle_evolve(const DenseLiouvillean& L, const CMatrix& rho0, double t) {
  return unvectorize(linalg::expm(t * L.L) * vectorize(rho0), L.dim());
}

CMatrix boltzmann_operator(const QuadraticHamiltonian& hamiltonian, double beta) {
  const auto w = dense_majoranas(hamiltonian.modes());
  CMatrix Hs = dense_quadratic(w, hamiltonian.H);
  Hs = 0.5 * (Hs + Hs.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(Hs);
  const RVector e = es.eigenvalues();
  const RVector boltzmann = (-beta * (e.array() - e.minCoeff())).exp();
  return es.eigenvectors() * boltzmann.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix gibbs_state(const QuadraticHamiltonian& hamiltonian, double beta) {
  const CMatrix g = boltzmann_operator(hamiltonian, beta);
  return g / g.trace();
}

double von_neumann_entropy(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double p : es.eigenvalues())
    if (p > 0.0) s -= p * std::log2(p);
  return s;
}

CMatrix two_point_of(const CMatrix& rho, int n) {
  const auto w = dense_majoranas(n);
  CMatrix T(2 * n, 2 * n);
  for (int j = 0; j < 2 * n; ++j)
    for (int k = 0; k < 2 * n; ++k) T(j, k) = oracle_expectation(rho, w[j] * w[k]);
  return T;
}

}  // namespace thirdq::oracle
