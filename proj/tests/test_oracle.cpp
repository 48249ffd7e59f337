#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "test_support.hpp"
#include "thirdq/errors.hpp"

using namespace thirdq;
using testing::max_diff;

TEST_SUITE("oracle") {
  TEST_CASE("Majorana operators") {
    for (int n : {1, 2, 3}) {
      const auto w = oracle::dense_majoranas(n);
      const int d = 1 << n;
      for (int j = 0; j < 2 * n; ++j) {
        CHECK(max_diff(w[j], w[j].adjoint()) == 0.0);
        for (int k = 0; k < 2 * n; ++k) {
          const CMatrix anti = w[j] * w[k] + w[k] * w[j];
          CHECK(max_diff(anti, (j == k ? 2.0 : 0.0) * CMatrix::Identity(d, d)) == 0.0);
        }
      }
      for (int s = 0; s < n; ++s) CHECK(max_diff(-kI * w[2 * s] * w[2 * s + 1], oracle::pauli(s, 'z', n)) == 0.0);
    }
    CHECK(max_diff(oracle::dense_majoranas(2)[0], oracle::pauli(0, 'x', 2)) == 0.0);
    CHECK(max_diff(oracle::dense_majoranas(2)[3], oracle::pauli(0, 'z', 2) * oracle::pauli(1, 'y', 2)) == 0.0);
  }

  TEST_CASE("vectorization is column-major and invertible") {
    CMatrix rho(2, 2);
    rho << 1, 2, 3, 4;
    const CVector v = oracle::vectorize(rho);
    CHECK(v(1) == cplx(3.0));
    CHECK(max_diff(oracle::unvectorize(v, 2), rho) == 0.0);
  }

  TEST_CASE("Liouvillean preserves trace and Hermiticity") {
    for (const QuadraticModel& m : {testing::redfield(2, 0.5, 0.9), testing::lindblad(3, 0.2, 0.4),
                                    xy_lindblad_model_rates({2, 0.5, 0.9}, {})}) {
      const auto L = oracle::dense_liouvillean(m);
      const int d = L.dim();
      CMatrix X = CMatrix::Zero(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) X(a, b) = cplx(std::sin(a + 2.0 * b), std::cos(3.0 * a - b));
      const CMatrix herm = X + X.adjoint();
      const CMatrix out = oracle::apply(L, herm);
      CHECK(std::abs(out.trace()) < 1e-12);
      CHECK(max_diff(out, out.adjoint()) < 1e-12);
      CHECK(std::abs(oracle::apply(L, X).trace()) < 1e-12);
    }
  }

  TEST_CASE("Lindblad forms give the same superoperator") {
    const XYLindbladParams rates{0.3, 0.6, 0.2, 0.4};
    const auto a = oracle::dense_liouvillean(xy_lindblad_model({3, 0.2, 1.05}, rates));
    const auto b = oracle::dense_liouvillean(xy_lindblad_model_rates({3, 0.2, 1.05}, rates));
    CHECK(max_diff(a.L, b.L) < 1e-12);
  }

  TEST_CASE("Gibbs state is a fixed point at equal temperatures") {
    for (auto [beta, g, h, theta] : {std::tuple{0.5, 0.5, 0.9, 0.5}, std::tuple{2.0, 0.2, 1.05, 0.0},
                                     std::tuple{5.0, 0.7, 0.3, 1.2}, std::tuple{1.0, 0.0, 0.5, 0.8}}) {
      const QuadraticModel m = testing::redfield(3, g, h, beta, beta, 0.2, theta);
      const auto L = oracle::dense_liouvillean(m);
      const CMatrix boltzmann = oracle::boltzmann_operator(m.hamiltonian, beta);
      CHECK(oracle::vectorize(oracle::apply(L, boltzmann)).norm() / oracle::vectorize(boltzmann).norm() <= 1e-10);
      CHECK(max_diff(oracle::oracle_ness(L), oracle::gibbs_state(m.hamiltonian, beta)) < 1e-9);
    }
  }

  TEST_CASE("even-sector spectrum matches the rapidity sums") {
    for (const QuadraticModel& m : {testing::redfield(2, 0.5, 0.9), testing::lindblad(2, 0.2, 1.05),
                                    testing::redfield(2, 0.0, 0.5, 1.0, 0.4, 0.3, 0.4)}) {
      const auto p = testing::solve(m);
      const auto L = oracle::dense_liouvillean(m);
      REQUIRE(L.even_indices.size() == 8);
      const auto expected = liouvillean_eigenvalues(p.modes, even_selectors(2));
      CHECK(oracle::multiset_distance(oracle::even_sector_spectrum(L), expected) < 1e-8);
    }
  }

  TEST_CASE("closed system has a degenerate kernel") {
    const auto L = oracle::dense_liouvillean(testing::redfield(2, 0.5, 0.9, 0.3, 5.2, 0.0));
    CHECK_THROWS_AS(oracle::oracle_ness(L), DegenerateKernel);
  }

  TEST_CASE("evolution preserves trace and converges to the steady state") {
    const auto L = oracle::dense_liouvillean(testing::lindblad(2, 0.5, 0.3));
    CMatrix rho0 = CMatrix::Zero(4, 4);
    rho0(0, 0) = 1.0;
    const CMatrix late = oracle::oracle_evolve(L, rho0, 200.0);
    CHECK(std::abs(oracle::oracle_evolve(L, rho0, 1.5).trace() - 1.0) < 1e-12);
    CHECK(max_diff(late, oracle::oracle_ness(L)) < 1e-9);
  }

  TEST_CASE("partial trace and entropy") {
    // |0⟩⟨0| ⊗ 1/2 ⊗ |1⟩⟨1|.
    CMatrix up = CMatrix::Zero(2, 2), down = CMatrix::Zero(2, 2);
    up(0, 0) = 1.0;
    down(1, 1) = 1.0;
    const CMatrix mixed = 0.5 * CMatrix::Identity(2, 2);
    const CMatrix rho = Eigen::kroneckerProduct(Eigen::kroneckerProduct(up, mixed).eval(), down).eval();
    CHECK(max_diff(oracle::oracle_reduced(rho, {0}, 3), up) == 0.0);
    CHECK(max_diff(oracle::oracle_reduced(rho, {1}, 3), mixed) == 0.0);
    CHECK(max_diff(oracle::oracle_reduced(rho, {0, 2}, 3), Eigen::kroneckerProduct(up, down).eval()) == 0.0);
    CHECK(oracle::von_neumann_entropy(rho) == doctest::Approx(1.0));
    CHECK(oracle::von_neumann_entropy(oracle::oracle_reduced(rho, {0, 2}, 3)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(oracle::oracle_reduced(rho, {3}, 3), InvalidArgument);
  }

  TEST_CASE("size limits") {
    CHECK_THROWS_AS(oracle::dense_liouvillean(testing::lindblad(5, 0.5, 0.9)), InvalidArgument);
  }
}
