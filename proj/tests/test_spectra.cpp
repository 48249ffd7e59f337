#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "thirdq/errors.hpp"

using namespace thirdq;
using testing::max_diff;

namespace {

void check_eigensystem(const QuadraticHamiltonian& h) {
  const HamiltonianEigensystem es = hamiltonian_eigensystem(h);
  const CMatrix& U = es.modes;
  const int n = h.modes();
  for (int m = 0; m < n; ++m) {
    CHECK(es.epsilons(m) >= 0.0);
    if (m > 0) CHECK(es.epsilons(m) >= es.epsilons(m - 1));
    CHECK((h.H * U.col(m) - es.epsilons(m) * U.col(m)).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((h.H * U.col(m).conjugate() + es.epsilons(m) * U.col(m).conjugate()).cwiseAbs().maxCoeff() < 1e-11);
  }
  CHECK(max_diff(U.transpose() * U, CMatrix::Zero(n, n)) < 1e-11);
  CHECK(max_diff(U.transpose() * U.conjugate(), CMatrix::Identity(n, n)) < 1e-11);
  Eigen::SelfAdjointEigenSolver<CMatrix> direct(h.H, Eigen::EigenvaluesOnly);
  std::vector<double> both;
  for (int m = 0; m < n; ++m) {
    both.push_back(es.epsilons(m));
    both.push_back(-es.epsilons(m));
  }
  std::sort(both.begin(), both.end());
  for (int i = 0; i < 2 * n; ++i) CHECK(std::abs(both[i] - direct.eigenvalues()(i)) < 1e-11);
}

void check_modes(const StructureMatrix& s, const NormalModes& modes) {
  const int n = s.modes();
  const CMatrix& V = modes.V;
  CHECK(max_diff(V * V.transpose(), symplectic_unit(n)) < 1e-9);
  CVector d(4 * n);
  for (int j = 0; j < 2 * n; ++j) {
    d(2 * j) = modes.rapidities(j);
    d(2 * j + 1) = -modes.rapidities(j);
  }
  const CMatrix rebuilt = V.transpose() * d.asDiagonal() * symplectic_unit(n) * V;
  CHECK(max_diff(rebuilt, s.A) < 1e-9 * std::max(1.0, linalg::max_abs(s.A)));
  for (Eigen::Index j = 0; j < modes.rapidities.size(); ++j) CHECK(modes.rapidities(j).real() >= -1e-12);
}

// Closing bond between site n and site 1 in the fermionic (periodic) sector.
QuadraticHamiltonian periodic_xy(int n, double gamma, double h) {
  QuadraticHamiltonian q = build_xy_hamiltonian({n, gamma, h});
  auto add_pair = [&](int a, int b, cplx c) {
    if (a > b) {
      std::swap(a, b);
      c = -c;
    }
    q.H(a - 1, b - 1) += c / 2.0;
    q.H(b - 1, a - 1) -= c / 2.0;
  };
  add_pair(2 * n, 1, -kI * (1.0 + gamma) / 2.0);
  add_pair(2 * n - 1, 2, kI * (1.0 - gamma) / 2.0);
  return q;
}

// C∞ window equal to one on [−inner, inner] and vanishing beyond outer.
double window(double w, double inner, double outer) {
  const double a = std::abs(w);
  if (a <= inner) return 1.0;
  if (a >= outer) return 0.0;
  const double x = (a - inner) / (outer - inner);
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  return psi(1.0 - x) / (psi(1.0 - x) + psi(x));
}

}  // namespace

TEST_SUITE("spectra") {
  TEST_CASE("single-site eigensystem") {
    const HamiltonianEigensystem es = hamiltonian_eigensystem(build_xy_hamiltonian({1, 0.0, 1.0}));
    CHECK(es.epsilons(0) == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("eigensystem invariants including zero and degenerate modes") {
    check_eigensystem(build_xy_hamiltonian({6, 0.5, 0.9}));
    check_eigensystem(build_xy_hamiltonian({6, 1.0, 0.0}));   // exact zero mode at the ends
    check_eigensystem(build_xy_hamiltonian({5, 0.0, 0.0}));   // symmetric spectrum with zero modes
    check_eigensystem(build_xy_hamiltonian({80, 0.5, 0.3}));  // edge mode below machine precision
    check_eigensystem(build_xy_hamiltonian({64, 0.5, 0.0}));
    QuadraticHamiltonian decoupled{CMatrix::Zero(8, 8)};
    for (int s = 0; s < 4; ++s) {
      decoupled.H(2 * s, 2 * s + 1) = -0.5 * kI;
      decoupled.H(2 * s + 1, 2 * s) = 0.5 * kI;
    }
    check_eigensystem(decoupled);  // fourfold degenerate ε
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    CMatrix K = CMatrix::Zero(10, 10);
    for (int j = 0; j < 10; ++j)
      for (int k = j + 1; k < 10; ++k) {
        K(j, k) = kI * g(rng);
        K(k, j) = -K(j, k);
      }
    check_eigensystem({K});
  }

  TEST_CASE("malformed Hamiltonians are rejected") {
    CMatrix real_part = CMatrix::Zero(2, 2);
    real_part(0, 1) = 1.0;
    real_part(1, 0) = -1.0;
    CHECK_THROWS_AS(hamiltonian_eigensystem({real_part}), MalformedHamiltonian);
    CMatrix symmetric = CMatrix::Zero(2, 2);
    symmetric(0, 1) = kI;
    symmetric(1, 0) = kI;
    CHECK_THROWS_AS(hamiltonian_eigensystem({symmetric}), MalformedHamiltonian);
  }

  TEST_CASE("periodic chain: single-particle energies are half the dispersion") {
    for (auto [n, g, h] : {std::tuple{12, 0.5, 0.3}, std::tuple{15, 0.2, 1.05}, std::tuple{20, 0.7, 0.9}}) {
      const HamiltonianEigensystem es = hamiltonian_eigensystem(periodic_xy(n, g, h));
      std::vector<double> omega;
      for (int j = 0; j < n; ++j) omega.push_back(xy_dispersion(2.0 * std::numbers::pi * j / n, g, h));
      std::sort(omega.begin(), omega.end());
      for (int j = 0; j < n; ++j) CHECK(es.epsilons(j) == doctest::Approx(0.5 * omega[j]).epsilon(1e-12));
    }
  }

  TEST_CASE("stationary points of the dispersion") {
    const auto q = xy_stationary_point(0.5, 0.3);
    REQUIRE(q.has_value());
    CHECK(std::cos(*q) == doctest::Approx(0.3 / 0.75).epsilon(1e-12));
    const double d = 1e-6;
    CHECK(std::abs(xy_dispersion(*q + d, 0.5, 0.3) - xy_dispersion(*q - d, 0.5, 0.3)) < 1e-10);
    CHECK_FALSE(xy_stationary_point(0.5, 0.9).has_value());
  }

  TEST_CASE("bath vector vanishes without coupling") {
    const QuadraticModel m = testing::redfield(4, 0.5, 0.9, 0.3, 5.2, 0.0);
    const auto es = hamiltonian_eigensystem(m.hamiltonian);
    for (const CVector& z : bath_vectors(es, m.couplings, std::get<RedfieldBaths>(m.dissipation)))
      CHECK(z.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("bath vector agrees with time-domain quadrature") {
    // z = ½∫dτ Γ(τ) f(−τ) with Γ(τ) = ∫dω W(ω)Γ̃(ω)e^{iωτ}; W equals one at the Bohr frequencies.
    for (auto [h, beta, lambda, theta] : {std::tuple{1.0, 0.7, 0.3, 0.0}, std::tuple{0.6, 2.0, 0.2, 0.4}}) {
      QuadraticModel model;
      model.hamiltonian = build_xy_hamiltonian({1, 0.0, h});
      CVector x(2);
      x << std::cos(theta), std::sin(theta);
      model.couplings = {{x, 0}};
      const RedfieldBaths baths{{RedfieldOhmic{beta, lambda}}};
      const CVector z = bath_vector(0, hamiltonian_eigensystem(model.hamiltonian), model.couplings, baths);

      const auto w = oracle::dense_majoranas(1);
      const CMatrix Hs = oracle::dense_quadratic(w, model.hamiltonian.H);
      const CMatrix X = oracle::dense_linear(w, x);
      const double inner = 3.0, outer = 8.0;
      const int n_omega = 4000;
      const double d_omega = 2.0 * outer / n_omega;
      std::vector<double> omegas, weights;
      for (int i = 0; i <= n_omega; ++i) {
        const double om = -outer + i * d_omega;
        omegas.push_back(om);
        weights.push_back(window(om, inner, outer) * ohmic_spectral_function(om, beta, lambda) * d_omega);
      }
      const double tau_max = 120.0, d_tau = 0.05;
      CVector zq = CVector::Zero(2);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(Hs);
      for (double tau = -tau_max; tau <= tau_max + 1e-12; tau += d_tau) {
        cplx gamma_tau = 0.0;
        for (std::size_t i = 0; i < omegas.size(); ++i) gamma_tau += weights[i] * std::exp(kI * omegas[i] * tau);
        const CVector phase = (-kI * tau * es.eigenvalues().cast<cplx>()).array().exp();
        const CMatrix evolve = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();  // e^{−iτH}
        const CMatrix Xt = evolve * X * evolve.adjoint();
        for (int j = 0; j < 2; ++j) zq(j) += 0.5 * d_tau * gamma_tau * (w[j] * Xt).trace() / 2.0;
      }
      CHECK((zq - z).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  TEST_CASE("bath vector is invariant under remixing of a degenerate pair") {
    QuadraticModel model;
    model.hamiltonian = {CMatrix::Zero(4, 4)};
    for (int s = 0; s < 2; ++s) {
      model.hamiltonian.H(2 * s, 2 * s + 1) = -0.4 * kI;
      model.hamiltonian.H(2 * s + 1, 2 * s) = 0.4 * kI;
    }
    CVector x(4);
    x << 0.3, -0.2, 0.7, 0.1;
    model.couplings = {{x, 0}};
    const RedfieldBaths baths{{RedfieldOhmic{0.9, 0.2}}};
    HamiltonianEigensystem es = hamiltonian_eigensystem(model.hamiltonian);
    REQUIRE(std::abs(es.epsilons(0) - es.epsilons(1)) < 1e-14);
    const CVector z = bath_vector(0, es, model.couplings, baths);
    const double a = 0.7;
    const cplx phase = std::exp(kI * 0.3);
    Eigen::Matrix2cd rot;
    rot << std::cos(a), -std::sin(a) * phase, std::sin(a) * std::conj(phase), std::cos(a);
    es.modes = (es.modes * rot).eval();
    CHECK((bath_vector(0, es, model.couplings, baths) - z).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("bath matrix forms") {
    CVector x = CVector::Zero(4), z = CVector::Zero(4);
    x(0) = 1.0;
    z(0) = cplx(0.2, 0.1);
    z(1) = cplx(-0.5, 0.3);
    const BathMatrix b = bath_matrix(std::vector<CouplingOperator>{{x, 0}}, std::vector<CVector>{z});
    CHECK(max_diff(b.M.row(0).transpose(), z) == 0.0);
    CHECK(b.M.bottomRows(3).cwiseAbs().maxCoeff() == 0.0);

    const ChainParams p{3, 0.2, 1.05};
    const XYLindbladParams rates{0.5, 0.3, 0.5, 0.1};
    const BathMatrix direct = bath_matrix(xy_lindblad_model(p, rates));
    const BathMatrix via_rates = bath_matrix(xy_lindblad_model_rates(p, rates));
    CHECK(max_diff(direct.M, via_rates.M) < 1e-12);
    CHECK(max_diff(direct.M, direct.M.adjoint()) < 1e-12);
    CHECK(direct.trace_term == doctest::Approx(via_rates.trace_term));

    const BathMatrix zero = bath_matrix(xy_lindblad_model(p, {0, 0, 0, 0}));
    CHECK(zero.M.cwiseAbs().maxCoeff() == 0.0);

    const auto couplings = build_xy_couplings({1, 0, 1, 0}, {0.3, 0, 0.3, 0}, 3);
    CMatrix bad = CMatrix::Identity(4, 4);
    bad(0, 1) = 0.5;
    CHECK_THROWS_AS(bath_matrix(std::vector<CouplingOperator>(couplings.begin(), couplings.end()), LindbladRates{bad}),
                    InvalidArgument);
  }

  TEST_CASE("white-noise limit of the Redfield pipeline is the Lindblad bath matrix") {
    for (auto [n, g, h] : {std::tuple{3, 0.5, 0.9}, std::tuple{6, 0.2, 1.05}, std::tuple{5, 0.0, 0.0}}) {
      const auto c = build_xy_couplings({1, 0.5, 1, 0.8}, {0.5, 1.2, -0.4, 0.9}, n);
      const std::vector<CouplingOperator> couplings(c.begin(), c.end());
      const QuadraticHamiltonian ham = build_xy_hamiltonian({n, g, h});
      const RedfieldBaths white{{WhiteNoise{0.4}, WhiteNoise{0.7}}};
      const BathMatrix red = bath_matrix(couplings, bath_vectors(hamiltonian_eigensystem(ham), couplings, white));
      CMatrix gamma = CMatrix::Zero(4, 4);
      gamma.diagonal() << 0.4, 0.4, 0.7, 0.7;
      const BathMatrix lin = bath_matrix(couplings, LindbladRates{gamma});
      CHECK(max_diff(red.M, lin.M) < 1e-12);
      CHECK(max_diff(lin.M, lin.M.adjoint()) < 1e-12);
    }
  }

  TEST_CASE("structure matrix without baths") {
    const QuadraticHamiltonian ham = build_xy_hamiltonian({3, 0.5, 0.9});
    const StructureMatrix s = assemble_structure_matrix(ham, {CMatrix::Zero(6, 6), 0.0});
    CHECK(s.A0 == 0.0);
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        CHECK(std::abs(s.A(2 * j, 2 * k) + 2.0 * kI * ham.H(j, k)) < 1e-15);
        CHECK(std::abs(s.A(2 * j + 1, 2 * k + 1) + 2.0 * kI * ham.H(j, k)) < 1e-15);
        CHECK(std::abs(s.A(2 * j, 2 * k + 1)) == 0.0);
        CHECK(std::abs(s.A(2 * j + 1, 2 * k)) == 0.0);
      }
  }

  TEST_CASE("structure matrix is antisymmetric with real A0") {
    for (const QuadraticModel& m : {testing::redfield(3, 0.5, 0.9), testing::redfield(7, 0.2, 1.05, 1.0, 1.0, 0.3),
                                    testing::lindblad(4, 0.5, 0.3), xy_lindblad_model_rates({5, 0.5, 0.3}, {})}) {
      const BathMatrix b = bath_matrix(m);
      const StructureMatrix s = assemble_structure_matrix(m.hamiltonian, b);
      CHECK(max_diff(s.A, -s.A.transpose()) < 1e-12);
      CHECK(s.A0 == doctest::Approx((b.M.trace() + b.M.conjugate().trace()).real()));
      CHECK(std::abs((b.M.trace() + b.M.conjugate().trace()).imag()) < 1e-12);
    }
  }

  TEST_CASE("XY structure matrix: block-tridiagonal bulk plus border") {
    const int n = 10;
    const double g = 0.5, h = 0.9;
    const QuadraticModel m = testing::redfield(n, g, h);
    const StructureMatrix s = structure_matrix(m);
    const StructureMatrix bulk = assemble_structure_matrix(m.hamiltonian, {CMatrix::Zero(2 * n, 2 * n), 0.0});
    // Site block s in the order (w_{2s−1}, w_{2s}) for the first copy, then the second copy.
    auto block = [&](const CMatrix& A, int r, int c) {
      const int pr[4] = {4 * r, 4 * r + 2, 4 * r + 1, 4 * r + 3};
      const int pc[4] = {4 * c, 4 * c + 2, 4 * c + 1, 4 * c + 3};
      Eigen::Matrix4cd out;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = A(pr[i], pc[j]);
      return out;
    };
    Eigen::Matrix2cd sx, sy, id2;
    sx << 0, 1, 1, 0;
    sy << 0, -kI, kI, 0;
    id2.setIdentity();
    auto kron2 = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
      Eigen::Matrix4cd out;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
      return out;
    };
    const Eigen::Matrix4cd a = -kI * h * kron2(id2, sy);
    const Eigen::Matrix4cd b = 0.5 * kron2(id2, kI * sy - g * sx);
    const Eigen::Matrix4cd c = -b.transpose();
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col) {
        Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
        if (r == col) expected = a;
        if (col == r + 1) expected = b;
        if (col == r - 1) expected = c;
        CHECK((block(bulk.A, r, col) - expected).cwiseAbs().maxCoeff() < 1e-14);
        if (r != 0 && r != n - 1 && col != 0 && col != n - 1)
          CHECK((block(s.A, r, col) - block(bulk.A, r, col)).cwiseAbs().maxCoeff() == 0.0);
      }
  }

  TEST_CASE("border blocks decay away from the contacts") {
    const int n = 40;
    const QuadraticModel m = testing::redfield(n, 0.5, 0.9);
    const StructureMatrix s = structure_matrix(m);
    const StructureMatrix bulk = assemble_structure_matrix(m.hamiltonian, {CMatrix::Zero(2 * n, 2 * n), 0.0});
    const CMatrix border = s.A - bulk.A;
    std::vector<double> left, right;
    for (int j = 0; j < n; ++j) {
      left.push_back(border.block(0, 4 * j, 4, 4).norm());
      right.push_back(border.block(4 * (n - 1), 4 * (n - 1 - j), 4, 4).norm());
    }
    const int burn_in = 4;
    const double floor = 1e-12 * left[0];
    for (int j = burn_in; j + 2 < n / 2; j += 2) {
      if (left[j + 2] > floor) CHECK(left[j + 2] < left[j]);
      if (right[j + 2] > floor) CHECK(right[j + 2] < right[j]);
    }
    CHECK(left[n / 2] < 1e-3 * left[0]);
  }

  TEST_CASE("normal modes recover a constructed symplectic decomposition") {
    const int n = 3;
    std::mt19937 rng(11);
    const CMatrix K = 0.4 * testing::random_antisymmetric(4 * n, rng);
    const CMatrix O = linalg::expm(K);
    CMatrix Q = CMatrix::Zero(4 * n, 4 * n);
    for (int j = 0; j < 2 * n; ++j) {
      Q(2 * j, 2 * j) = Q(2 * j + 1, 2 * j) = 1.0 / std::sqrt(2.0);
      Q(2 * j, 2 * j + 1) = kI / std::sqrt(2.0);
      Q(2 * j + 1, 2 * j + 1) = -kI / std::sqrt(2.0);
    }
    const CMatrix V = Q * O;
    REQUIRE(max_diff(V * V.transpose(), symplectic_unit(n)) < 1e-12);
    std::vector<cplx> betas{{0.1, 0.5}, {0.2, -0.3}, {0.35, 1.0}, {0.5, 0.0}, {0.8, 0.2}, {1.1, -0.9}};
    CVector d(4 * n);
    for (int j = 0; j < 2 * n; ++j) {
      d(2 * j) = betas[j];
      d(2 * j + 1) = -betas[j];
    }
    const StructureMatrix s{V.transpose() * d.asDiagonal() * symplectic_unit(n) * V, 0.0};
    const NormalModes modes = normal_modes(s);
    for (int j = 0; j < 2 * n; ++j) CHECK(std::abs(modes.rapidities(j) - betas[j]) < 1e-10);
    check_modes(s, modes);

    const StructureMatrix scaled{2.5 * s.A, 0.0};
    const NormalModes scaled_modes = normal_modes(scaled);
    for (int j = 0; j < 2 * n; ++j) CHECK(std::abs(scaled_modes.rapidities(j) - 2.5 * betas[j]) < 1e-9);
    check_modes(scaled, scaled_modes);
  }

  TEST_CASE("normal modes of XY models") {
    for (const QuadraticModel& m : {testing::redfield(2, 0.5, 0.9), testing::redfield(6, 0.2, 1.05),
                                    testing::lindblad(5, 0.5, 0.3), testing::redfield(30, 0.5, 0.3)}) {
      const StructureMatrix s = structure_matrix(m);
      const NormalModes modes = normal_modes(s);
      CHECK(modes.rapidities.real().minCoeff() > 0.0);
      CHECK_FALSE(modes.zero_rapidity);
      check_modes(s, modes);
    }
  }

  TEST_CASE("rapidity-degenerate mirror-symmetric system") {
    // Two identical decoupled chains with identical baths: every rapidity is doubly degenerate.
    const int half = 3;
    const QuadraticModel piece = testing::redfield(half, 0.5, 0.9, 0.5, 2.0, 0.2);
    const int n = 2 * half;
    QuadraticModel m;
    m.hamiltonian.H = CMatrix::Zero(2 * n, 2 * n);
    m.hamiltonian.H.topLeftCorner(2 * half, 2 * half) = piece.hamiltonian.H;
    m.hamiltonian.H.bottomRightCorner(2 * half, 2 * half) = piece.hamiltonian.H;
    for (int copy = 0; copy < 2; ++copy)
      for (const CouplingOperator& c : piece.couplings) {
        CVector x = CVector::Zero(2 * n);
        x.segment(2 * half * copy, 2 * half) = c.x;
        m.couplings.push_back({x, c.bath_id});
      }
    m.dissipation = piece.dissipation;
    const StructureMatrix s = structure_matrix(m);
    const NormalModes modes = normal_modes(s);
    check_modes(s, modes);
    for (int j = 0; j < 2 * n; j += 2) CHECK(std::abs(modes.rapidities(j) - modes.rapidities(j + 1)) < 1e-8);
  }

  TEST_CASE("closed dynamics has no gap") {
    const QuadraticModel m = testing::redfield(4, 0.5, 0.9, 0.3, 5.2, 0.0);
    const NormalModes modes = normal_modes(structure_matrix(m));
    CHECK(spectral_gap(modes) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(modes.zero_rapidity);
    CHECK_FALSE(modes.warnings.empty());
  }

  TEST_CASE("spectral gap and Liouvillean eigenvalues") {
    NormalModes modes;
    modes.rapidities.resize(3);
    modes.rapidities << cplx(1, 1), cplx(0.3, 0), cplx(2, 0);
    CHECK(spectral_gap(modes) == doctest::Approx(0.6));
    const auto values = liouvillean_eigenvalues(modes, {{0, 0, 0}, {1, 1, 0}, {0, 1, 1}});
    CHECK(std::abs(values[0]) == 0.0);
    CHECK(std::abs(values[1] + 2.0 * (cplx(1, 1) + cplx(0.3, 0))) < 1e-15);
    CHECK(std::abs(values[2] + 2.0 * cplx(2.3, 0)) < 1e-15);
    CHECK(even_selectors(2).size() == 8);
    CHECK_THROWS_AS(even_selectors(9), InvalidArgument);
    CHECK_THROWS_AS(liouvillean_eigenvalues(modes, {{1, 0}}), DimensionMismatch);
  }

  TEST_CASE("gap scaling is a power law at the default baths") {
    std::vector<double> ns, gaps;
    for (int n = 10; n <= 60; n += 10) {
      ns.push_back(n);
      gaps.push_back(spectral_gap(normal_modes(structure_matrix(testing::redfield(n, 0.5, 0.8)))));
    }
    // Local slopes stay negative and steep; the fitted exponent is checked by the acceptance suite.
    for (std::size_t i = 0; i + 1 < ns.size(); ++i)
      CHECK(std::log(gaps[i + 1] / gaps[i]) / std::log(ns[i + 1] / ns[i]) < -2.0);
  }
}
