/*
 * Copyright 2026 The ngs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include "ngs/gaussian.hpp"
#include "ngs/oracle.hpp"
#include "support.hpp"

using namespace ngs;
using ngs::testing::random_skew;

namespace {

// xi with exp(i xi) rotating the (a, b) plane by theta.
GaussianParams plane_rotation(Index n, Index a, Index b, double theta) {
  CMatrix xi = CMatrix::Zero(2 * n, 2 * n);
  xi(a, b) = Complex(0.0, -theta);
  xi(b, a) = Complex(0.0, theta);
  return GaussianParams(n, xi);
}

// Gamma_kl = (i/2) <[A_k, A_l]> from a Fock-space vector.
RMatrix dense_covariance(const CVector& psi, Index n) {
  RMatrix g = RMatrix::Zero(2 * n, 2 * n);
  for (Index k = 0; k < 2 * n; ++k) {
    for (Index l = 0; l < 2 * n; ++l) {
      const CVector kl = apply_majorana(apply_majorana(psi, l, n), k, n);
      const CVector lk = apply_majorana(apply_majorana(psi, k, n), l, n);
      const Complex v = 0.5 * kI * psi.dot(kl - lk);
      g(k, l) = v.real();
    }
  }
  return g;
}

}  // namespace

TEST_SUITE("gaussian") {
  TEST_CASE("symplectic form layout") {
    const RMatrix u = symplectic_form(2);
    CHECK(u(0, 2) == 1.0);
    CHECK(u(2, 0) == -1.0);
    CHECK(u(1, 3) == 1.0);
    CHECK((u * u + RMatrix::Identity(4, 4)).norm() == 0.0);
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(GaussianParams(0, CMatrix(0, 0)), DimensionError);
    CHECK_THROWS_AS(GaussianParams(1, CMatrix::Zero(3, 3)), DimensionError);
    CMatrix sym = CMatrix::Zero(2, 2);
    sym(0, 1) = sym(1, 0) = 1.0;
    CHECK_THROWS_AS(GaussianParams(1, sym), ValidationError);
    RMatrix g = RMatrix::Zero(2, 2);
    g(0, 1) = 1.0;
    CHECK_THROWS_AS(CovarianceMatrix{g}, ValidationError);
    CHECK_THROWS_AS(CovarianceMatrix{RMatrix::Zero(3, 3)}, DimensionError);
  }

  TEST_CASE("vacuum and fully occupied references") {
    const CovarianceMatrix vac = covariance_from_xi(GaussianParams::zero(3));
    CHECK((vac.gamma() + symplectic_form(3)).norm() == 0.0);
    CHECK(occupation_numbers(vac) == RVector::Zero(3));
    CHECK(occupation_numbers(CovarianceMatrix::fully_occupied(3)) == RVector::Ones(3));
    CHECK((dense_covariance(dense_vacuum(3).amplitudes, 3) - vac.gamma()).norm() < 1e-14);
  }

  TEST_CASE("pi rotation of the second Majorana pair fills both modes") {
    const GaussianParams xi = plane_rotation(2, 2, 3, kPi);
    const CovarianceMatrix g = covariance_from_xi(xi);
    CHECK((g.gamma() - symplectic_form(2)).norm() < 1e-12);
    const DenseState s = dense_state(xi, NonGaussianParams::zero(2));
    for (Index j = 0; j < 2; ++j) {
      const Complex n = dense_expectation(s, PhaseVector(RVector::Zero(2)),
                                         OperatorString({create(j), annihilate(j)}));
      CHECK(std::abs(n - 1.0) < 1e-12);
    }
    // a single-mode Gaussian unitary cannot leave the vacuum's parity sector
    const CovarianceMatrix one = covariance_from_xi(plane_rotation(1, 0, 1, 0.5 * kPi));
    CHECK((one.gamma() + symplectic_form(1)).norm() < 1e-12);
  }

  TEST_CASE("random covariances are pure and match the dense state") {
    std::mt19937_64 rng(31);
    for (Index n : {1, 2, 3, 4}) {
      for (int draw = 0; draw < 5; ++draw) {
        const GaussianParams xi = random_gaussian_params(n, rng);
        const CovarianceMatrix g = covariance_from_xi(xi);
        CHECK(g.purity_error() < 1e-12);
        const DenseState s = dense_state(xi, NonGaussianParams::zero(n));
        CHECK((dense_covariance(s.amplitudes, n) - g.gamma()).norm() < 1e-11);
        const RVector occ = occupation_numbers(g);
        for (Index j = 0; j < n; ++j) {
          const Complex ref = dense_expectation(s, PhaseVector(RVector::Zero(n)),
                                                OperatorString({create(j), annihilate(j)}));
          CHECK(std::abs(occ(j) - ref.real()) < 1e-10);
          CHECK(occ(j) > -1e-10);
          CHECK(occ(j) < 1.0 + 1e-10);
        }
      }
    }
  }

  TEST_CASE("2 pi spectral shift leaves the covariance unchanged") {
    const CovarianceMatrix a = covariance_from_xi(plane_rotation(2, 0, 3, 0.4));
    const CovarianceMatrix b = covariance_from_xi(plane_rotation(2, 0, 3, 0.4 + 2.0 * kPi));
    CHECK((a.gamma() - b.gamma()).norm() < 1e-10);
  }

  TEST_CASE("purification") {
    std::mt19937_64 rng(32);
    for (int draw = 0; draw < 10; ++draw) {
      const CovarianceMatrix g = covariance_from_xi(random_gaussian_params(3, rng));
      const CovarianceMatrix p = purify(g.gamma());
      CHECK((p.gamma() - g.gamma()).norm() < 1e-12);
      const CovarianceMatrix shrunk = purify(0.99 * g.gamma());
      CHECK((shrunk.gamma() - g.gamma()).norm() < 1e-12);
      const RMatrix noisy = g.gamma() + 0.05 * random_skew(6, rng);
      const CovarianceMatrix once = purify(noisy);
      CHECK(once.purity_error() < 1e-12);
      CHECK((purify(once.gamma()).gamma() - once.gamma()).norm() < 1e-12);
    }
    CHECK_THROWS_AS(purify(RMatrix::Zero(4, 4)), DegeneracyError);
  }

  TEST_CASE("density matrix round trip and mean-field filling") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    const CovarianceMatrix g = covariance_from_density(rho);
    CHECK(occupation_numbers(g)(0) == doctest::Approx(1.0));
    CHECK(occupation_numbers(g)(1) == doctest::Approx(0.0));

    const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 0.0, 0.0, false);
    const CovarianceMatrix mf = mean_field_covariance(h.f(), 2);
    CHECK(mf.purity_error() < 1e-12);
    CHECK(occupation_numbers(mf).sum() == doctest::Approx(2.0));
    // U = 0: the Slater determinant is the exact ground state
    const double e = energy(mf, NonGaussianParams::zero(4), h).total;
    CHECK(e == doctest::Approx(dense_ground(h).energy).epsilon(1e-12));
    CHECK_THROWS_AS(mean_field_covariance(h.f(), 5), ValidationError);
  }
}
