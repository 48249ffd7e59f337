#include "thirdq/spectra.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "thirdq/errors.hpp"
#include "thirdq/linalg.hpp"

namespace thirdq {

namespace {

double scale_of(const CMatrix& m) { return std::max(1.0, linalg::max_abs(m)); }

void check_hamiltonian(const CMatrix& H) {
  if (H.rows() != H.cols() || H.rows() % 2 != 0)
    throw MalformedHamiltonian("H must be square with even dimension");
  const double scale = scale_of(H);
  if (linalg::max_abs(H + H.transpose()) > 1e-12 * scale) throw MalformedHamiltonian("H is not antisymmetric");
  if (H.real().cwiseAbs().maxCoeff() > 1e-9 * scale) throw MalformedHamiltonian("H is not purely imaginary");
}

struct WeightPair {
  double forward;  // Γ̃(4ε)
  double boosted;  // e^{4εβ} Γ̃(4ε)
};

WeightPair bath_weights(const RedfieldBath& bath, double bohr) {
  if (const auto* ohmic = std::get_if<RedfieldOhmic>(&bath)) {
    if (ohmic->beta < 0.0) throw InvalidArgument("bath inverse temperature must be nonnegative");
    return {ohmic_spectral_function(bohr, ohmic->beta, ohmic->lambda),
            ohmic_spectral_function_boosted(bohr, ohmic->beta, ohmic->lambda)};
  }
  const double flat = std::get<WhiteNoise>(bath).rate / std::numbers::pi;
  return {flat, flat};
}

// Connected components of eigenvalues closer than tol.
std::vector<std::vector<int>> cluster(const CVector& values, double tol) {
  const int N = static_cast<int>(values.size());
  std::vector<int> parent(N);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      if (std::abs(values(i) - values(j)) < tol) parent[find(i)] = find(j);
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(N, -1);
  for (int i = 0; i < N; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

cplx mean_of(const CVector& values, const std::vector<int>& idx) {
  cplx s = 0.0;
  for (int i : idx) s += values(i);
  return s / static_cast<double>(idx.size());
}

struct ModePair {
  cplx beta;
  CVector plus;
  CVector minus;
};

// Bilinear Gram–Schmidt on a self-paired (β ≈ 0) cluster, split into isotropic pairs.
std::vector<ModePair> split_self_paired(std::vector<CVector> ys, cplx beta) {
  std::vector<CVector> es;
  while (!ys.empty()) {
    std::size_t best = 0;
    double best_ratio = -1.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double ratio = std::abs(bilinear(ys[i], ys[i])) / ys[i].squaredNorm();
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = i;
      }
    }
    CVector e;
    if (best_ratio > 1e-6) {
      e = ys[best];
      ys.erase(ys.begin() + static_cast<std::ptrdiff_t>(best));
    } else {
      // Isotropic vectors: combine the pair with the largest mutual product.
      std::size_t bi = 0, bj = 1;
      double big = -1.0;
      for (std::size_t i = 0; i < ys.size(); ++i)
        for (std::size_t j = i + 1; j < ys.size(); ++j) {
          const double v = std::abs(bilinear(ys[i], ys[j])) / (ys[i].norm() * ys[j].norm());
          if (v > big) {
            big = v;
            bi = i;
            bj = j;
          }
        }
      if (ys.size() < 2 || big < 1e-10) throw NonDiagonalizable("degenerate zero-rapidity cluster is bilinearly singular");
      e = ys[bi] + ys[bj] * (bilinear(ys[bi], ys[bj]) / std::abs(bilinear(ys[bi], ys[bj])));
      ys.erase(ys.begin() + static_cast<std::ptrdiff_t>(bi));
    }
    e /= std::sqrt(bilinear(e, e));
    for (CVector& y : ys) y -= bilinear(y, e) * e;
    es.push_back(std::move(e));
  }
  std::vector<ModePair> out;
  for (std::size_t i = 0; i + 1 < es.size(); i += 2)
    out.push_back({beta, (es[i] + kI * es[i + 1]) / std::sqrt(2.0), (es[i] - kI * es[i + 1]) / std::sqrt(2.0)});
  return out;
}

}  // namespace

HamiltonianEigensystem hamiltonian_eigensystem(const QuadraticHamiltonian& hamiltonian) {
  const CMatrix& H = hamiltonian.H;
  check_hamiltonian(H);
  const int N = static_cast<int>(H.rows());
  const int n = N / 2;
  // H = iK with K real antisymmetric; each 2×2 real Schur block of K yields u = (s1 ± i s2)/√2.
  const RMatrix K = H.imag();
  Eigen::RealSchur<RMatrix> schur(K);
  if (schur.info() != Eigen::Success) throw MalformedHamiltonian("real Schur decomposition failed");
  const RMatrix& T = schur.matrixT();
  const RMatrix& S = schur.matrixU();

  std::vector<std::pair<double, CVector>> found;
  std::vector<int> singles;
  for (int i = 0; i < N;) {
    if (i + 1 < N && T(i + 1, i) != 0.0) {
      const double b = 0.5 * (T(i + 1, i) - T(i, i + 1));
      const double sign = b >= 0.0 ? 1.0 : -1.0;
      CVector u = (S.col(i).cast<cplx>() + sign * kI * S.col(i + 1).cast<cplx>()) / std::sqrt(2.0);
      found.emplace_back(std::abs(b), std::move(u));
      i += 2;
    } else {
      singles.push_back(i);
      ++i;
    }
  }
  if (singles.size() % 2 != 0) throw MalformedHamiltonian("odd number of real Schur singletons");
  for (std::size_t k = 0; k < singles.size(); k += 2) {
    const double t = 0.5 * std::abs(T(singles[k], singles[k]) + T(singles[k + 1], singles[k + 1]));
    CVector u = (S.col(singles[k]).cast<cplx>() + kI * S.col(singles[k + 1]).cast<cplx>()) / std::sqrt(2.0);
    found.emplace_back(t, std::move(u));
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  HamiltonianEigensystem out{RVector(n), CMatrix(N, n)};
  for (int m = 0; m < n; ++m) {
    out.epsilons(m) = found[m].first;
    out.modes.col(m) = found[m].second;
  }
  return out;
}

CVector bath_vector(int nu, const HamiltonianEigensystem& eigensystem, const std::vector<CouplingOperator>& couplings,
                    const RedfieldBaths& baths) {
  if (nu < 0 || nu >= static_cast<int>(couplings.size())) throw InvalidArgument("coupling index out of range");
  const CouplingOperator& c = couplings[nu];
  if (c.bath_id < 0 || c.bath_id >= static_cast<int>(baths.baths.size()))
    throw InvalidArgument("coupling refers to unknown bath " + std::to_string(c.bath_id));
  const CMatrix& U = eigensystem.modes;
  if (c.x.size() != U.rows()) throw DimensionMismatch("coupling vector length differs from 2n");
  const int n = static_cast<int>(U.cols());
  CVector forward(n), boosted(n);
  for (int m = 0; m < n; ++m) {
    const WeightPair w = bath_weights(baths.baths[c.bath_id], 4.0 * eigensystem.epsilons(m));
    forward(m) = w.forward;
    boosted(m) = w.boosted;
  }
  const CVector along = forward.cwiseProduct(U.adjoint() * c.x);    // Γ̃ (x·u_m*)
  const CVector against = boosted.cwiseProduct(U.transpose() * c.x);  // e^{4εβ}Γ̃ (x·u_m)
  return std::numbers::pi * (U * along + U.conjugate() * against);
}

std::vector<CVector> bath_vectors(const HamiltonianEigensystem& eigensystem,
                                  const std::vector<CouplingOperator>& couplings, const RedfieldBaths& baths) {
  std::vector<CVector> zs;
  zs.reserve(couplings.size());
  for (int nu = 0; nu < static_cast<int>(couplings.size()); ++nu)
    zs.push_back(bath_vector(nu, eigensystem, couplings, baths));
  return zs;
}

BathMatrix bath_matrix(const std::vector<CouplingOperator>& couplings, const std::vector<CVector>& z_vectors) {
  if (couplings.size() != z_vectors.size() || couplings.empty())
    throw DimensionMismatch("bath_matrix needs one z vector per coupling");
  const Eigen::Index N = couplings.front().x.size();
  CMatrix M = CMatrix::Zero(N, N);
  for (std::size_t nu = 0; nu < couplings.size(); ++nu) {
    if (couplings[nu].x.size() != N || z_vectors[nu].size() != N) throw DimensionMismatch("inconsistent vector lengths");
    M += couplings[nu].x * z_vectors[nu].transpose();
  }
  return {M, 2.0 * M.trace().real()};
}

BathMatrix bath_matrix(const std::vector<CouplingOperator>& couplings, const LindbladRates& rates) {
  const CMatrix& g = rates.gamma;
  const auto count = static_cast<Eigen::Index>(couplings.size());
  if (couplings.empty() || g.rows() != count || g.cols() != count)
    throw DimensionMismatch("rate matrix must be square over the coupling indices");
  if (linalg::max_abs(g - g.adjoint()) > 1e-12 * scale_of(g)) throw InvalidArgument("Lindblad rate matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  if (es.eigenvalues().minCoeff() < -1e-12 * scale_of(g))
    throw InvalidArgument("Lindblad rate matrix is not positive semidefinite");
  const Eigen::Index N = couplings.front().x.size();
  CMatrix M = CMatrix::Zero(N, N);
  for (Eigen::Index nu = 0; nu < count; ++nu)
    for (Eigen::Index mu = 0; mu < count; ++mu) M += g(nu, mu) * couplings[nu].x * couplings[mu].x.transpose();
  return {M, 2.0 * M.trace().real()};
}

BathMatrix bath_matrix(const LindbladOperators& operators, int modes) {
  const Eigen::Index N = 2 * modes;
  CMatrix M = CMatrix::Zero(N, N);
  for (const CVector& l : operators.l) {
    if (l.size() != N) throw DimensionMismatch("Lindblad operator vector length differs from 2n");
    M += l.conjugate() * l.transpose();
  }
  return {M, 2.0 * M.trace().real()};
}

BathMatrix bath_matrix(const QuadraticModel& model) {
  if (const auto* baths = std::get_if<RedfieldBaths>(&model.dissipation)) {
    const HamiltonianEigensystem es = hamiltonian_eigensystem(model.hamiltonian);
    return bath_matrix(model.couplings, bath_vectors(es, model.couplings, *baths));
  }
  if (const auto* rates = std::get_if<LindbladRates>(&model.dissipation)) return bath_matrix(model.couplings, *rates);
  return bath_matrix(std::get<LindbladOperators>(model.dissipation), model.modes());
}

StructureMatrix assemble_structure_matrix(const QuadraticHamiltonian& hamiltonian, const BathMatrix& bath) {
  const CMatrix& H = hamiltonian.H;
  const CMatrix& M = bath.M;
  if (H.rows() != M.rows() || H.cols() != M.cols()) throw DimensionMismatch("H and M must have equal shape");
  const Eigen::Index N = H.rows();
  CMatrix A(2 * N, 2 * N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index k = 0; k < N; ++k) {
      A(2 * j, 2 * k) = -2.0 * kI * H(j, k) - M(j, k) + M(k, j);
      A(2 * j, 2 * k + 1) = kI * M(k, j) + kI * std::conj(M(j, k));
      A(2 * j + 1, 2 * k) = -kI * M(j, k) - kI * std::conj(M(k, j));
      A(2 * j + 1, 2 * k + 1) = -2.0 * kI * H(j, k) - std::conj(M(j, k)) + std::conj(M(k, j));
    }
  if (linalg::max_abs(A + A.transpose()) > 1e-12 * scale_of(A))
    throw InconsistentStructure("assembled structure matrix is not antisymmetric");
  return {std::move(A), bath.trace_term};
}

StructureMatrix structure_matrix(const QuadraticModel& model) {
  return assemble_structure_matrix(model.hamiltonian, bath_matrix(model));
}

NormalModes normal_modes(const StructureMatrix& structure) {
  const CMatrix& A = structure.A;
  const int N = static_cast<int>(A.rows());
  if (N == 0 || N % 4 != 0 || A.cols() != N) throw DimensionMismatch("structure matrix must be 4n×4n");
  const linalg::EigenDecomposition ed = linalg::eig(A);
  const double scale = std::max(ed.values.cwiseAbs().maxCoeff(), 1e-300);
  const double tol = 1e-12 * scale;
  const auto groups = cluster(ed.values, tol);

  NormalModes out;
  std::vector<ModePair> pairs;
  std::vector<bool> used(groups.size(), false);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (used[g]) continue;
    used[g] = true;
    const cplx mu = mean_of(ed.values, groups[g]);
    if (std::abs(mu) < tol) {
      if (groups[g].size() % 2 != 0) throw NonDiagonalizable("zero-rapidity cluster has odd size");
      std::vector<CVector> ys;
      for (int i : groups[g]) ys.push_back(ed.vectors.col(i));
      for (ModePair& p : split_self_paired(std::move(ys), 0.0)) pairs.push_back(std::move(p));
      continue;
    }
    std::size_t partner = groups.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < groups.size(); ++h) {
      if (used[h]) continue;
      const double d = std::abs(mean_of(ed.values, groups[h]) + mu);
      if (d < best) {
        best = d;
        partner = h;
      }
    }
    if (partner == groups.size() || groups[partner].size() != groups[g].size() || best > 1e3 * tol)
      throw NonDiagonalizable("eigenvalues of A do not pair as ±β");
    used[partner] = true;
    const cplx nu = mean_of(ed.values, groups[partner]);
    bool g_is_plus = mu.real() > nu.real();
    if (std::abs(mu.real() - nu.real()) < tol) g_is_plus = mu.imag() >= nu.imag();
    const auto& plus_idx = g_is_plus ? groups[g] : groups[partner];
    const auto& minus_idx = g_is_plus ? groups[partner] : groups[g];
    const auto k = static_cast<Eigen::Index>(plus_idx.size());
    CMatrix P(k, N), Q(k, N);
    for (Eigen::Index r = 0; r < k; ++r) {
      P.row(r) = ed.vectors.col(plus_idx[r]).transpose();
      Q.row(r) = ed.vectors.col(minus_idx[r]).transpose();
    }
    if (k == 1) {
      const cplx s = bilinear(P.row(0).transpose(), Q.row(0).transpose());
      if (std::abs(s) < 1e-14) throw NonDiagonalizable("eigenvector pair is bilinearly orthogonal");
      const cplx root = std::sqrt(s);
      pairs.push_back({ed.values(plus_idx[0]), P.row(0).transpose() / root, Q.row(0).transpose() / root});
    } else {
      const CMatrix Smat = P * Q.transpose();
      Eigen::FullPivLU<CMatrix> lu(Smat);
      if (!lu.isInvertible()) throw NonDiagonalizable("degenerate cluster has singular bilinear Gram matrix");
      const CMatrix Qn = lu.inverse().transpose() * Q;
      for (Eigen::Index r = 0; r < k; ++r)
        pairs.push_back({ed.values(plus_idx[r]), P.row(r).transpose(), Qn.row(r).transpose()});
    }
  }
  if (static_cast<int>(pairs.size()) * 4 != 2 * N) throw NonDiagonalizable("pairing produced the wrong number of modes");

  std::stable_sort(pairs.begin(), pairs.end(), [](const ModePair& a, const ModePair& b) {
    if (a.beta.real() != b.beta.real()) return a.beta.real() < b.beta.real();
    return a.beta.imag() < b.beta.imag();
  });
  out.rapidities.resize(static_cast<Eigen::Index>(pairs.size()));
  out.V.resize(N, N);
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    out.rapidities(r) = pairs[j].beta;
    out.V.row(2 * r) = pairs[j].plus.transpose();
    out.V.row(2 * r + 1) = pairs[j].minus.transpose();
  }
  // V⁻¹ = Vᵀ J, so cond(V) = ‖V‖².
  const double norm = linalg::spectral_norm(out.V);
  out.condition_estimate = norm * norm;
  if (!(out.condition_estimate <= 1e12))
    throw NonDiagonalizable("eigenvector matrix condition number " + std::to_string(out.condition_estimate));
  const double min_re = out.rapidities.real().minCoeff();
  if (min_re < 1e-10) {
    out.zero_rapidity = true;
    out.warnings.push_back("ZeroRapidity: min Re beta = " + std::to_string(min_re) + "; NESS may be non-unique");
  }
  return out;
}

CMatrix symplectic_unit(int modes) {
  CMatrix J = CMatrix::Zero(4 * modes, 4 * modes);
  for (int j = 0; j < 2 * modes; ++j) {
    J(2 * j, 2 * j + 1) = 1.0;
    J(2 * j + 1, 2 * j) = 1.0;
  }
  return J;
}

double spectral_gap(const NormalModes& modes) { return 2.0 * std::max(0.0, modes.rapidities.real().minCoeff()); }

std::vector<cplx> liouvillean_eigenvalues(const NormalModes& modes, const std::vector<std::vector<int>>& selectors) {
  std::vector<cplx> out;
  out.reserve(selectors.size());
  for (const auto& nu : selectors) {
    if (static_cast<Eigen::Index>(nu.size()) != modes.rapidities.size())
      throw DimensionMismatch("selector length must equal 2n");
    cplx s = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      if (nu[j] != 0 && nu[j] != 1) throw InvalidArgument("selector entries must be 0 or 1");
      if (nu[j]) s += modes.rapidities(static_cast<Eigen::Index>(j));
    }
    out.push_back(-2.0 * s);
  }
  return out;
}

std::vector<std::vector<int>> even_selectors(int n) {
  if (n > 8) throw InvalidArgument("full selector enumeration refused beyond n = 8");
  const int width = 2 * n;
  std::vector<std::vector<int>> out;
  for (unsigned long mask = 0; mask < (1UL << width); ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    std::vector<int> nu(width);
    for (int j = 0; j < width; ++j) nu[j] = static_cast<int>((mask >> j) & 1UL);
    out.push_back(std::move(nu));
  }
  return out;
}

double xy_dispersion(double q, double gamma, double h) {
  const double c = std::cos(q) - h;
  const double s = gamma * std::sin(q);
  return std::sqrt(c * c + s * s);
}

std::optional<double> xy_stationary_point(double gamma, double h) {
  // dω²/dq = 2 sin q [(γ² − 1) cos q + h]; bisect the bracket factor on (0, π).
  auto f = [&](double q) { return (gamma * gamma - 1.0) * std::cos(q) + h; };
  double lo = 0.0, hi = std::numbers::pi;
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0 || fhi == 0.0 || (flo > 0.0) == (fhi > 0.0)) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace thirdq
