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

#include "ngs/optimizer.hpp"
#include "ngs/oracle.hpp"
#include "support.hpp"

using namespace ngs;
using ngs::testing::random_omega;
using ngs::testing::random_skew;

namespace {

CovarianceMatrix random_gamma(Index n, std::mt19937_64& rng) {
  return covariance_from_xi(random_gaussian_params(n, rng));
}

// Mean-field state of the two-site model, rotated off its symmetric point.
CovarianceMatrix broken_symmetry_start(const ManyBodyHamiltonian& h) {
  std::mt19937_64 rng(1);
  return rotate_covariance(mean_field_covariance(h.f(), 2),
                           random_gaussian_params(h.n_modes(), rng, 0.1));
}

double trace_o_squared(const CovarianceMatrix& g, const RMatrix& d) {
  const CMatrix o = mean_field_o(g, d);
  return (o * o).trace().real();
}

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("B tensor symmetries and positivity") {
    std::mt19937_64 rng(51);
    for (Index n : {2, 3, 4}) {
      const BTensor b = b_tensor(random_gamma(n, rng));
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l)
          for (Index m = 0; m < n; ++m)
            for (Index q = 0; q < n; ++q) {
              CHECK(b(k, l, m, q) == doctest::Approx(b(m, q, k, l)));
              CHECK(b(k, l, m, q) == doctest::Approx(b(l, k, m, q)));
              if (k == l || m == q) CHECK(b(k, l, m, q) == 0.0);
            }
      Eigen::SelfAdjointEigenSolver<RMatrix> eig(b.reduced());
      CHECK(eig.eigenvalues().minCoeff() > -1e-12);

      RMatrix flat(n * n, n * n);
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l)
          for (Index m = 0; m < n; ++m)
            for (Index q = 0; q < n; ++q) flat(k * n + l, m * n + q) = b(k, l, m, q);
      Eigen::SelfAdjointEigenSolver<RMatrix> full(flat);
      CHECK(b.spectral_norm() ==
            doctest::Approx(full.eigenvalues().cwiseAbs().maxCoeff()).epsilon(1e-12));
    }
  }

  TEST_CASE("quadratic form equals tr(O^2)") {
    std::mt19937_64 rng(52);
    for (int draw = 0; draw < 50; ++draw) {
      const Index n = 2 + draw % 4;
      const CovarianceMatrix g = random_gamma(n, rng);
      const RMatrix d = random_omega(n, rng);
      CHECK(std::abs(b_tensor(g).quadratic_form(d) - trace_o_squared(g, d)) < 1e-10);
    }
  }

  TEST_CASE("HITGD update cancels the omega contribution") {
    std::mt19937_64 rng(53);
    for (int draw = 0; draw < 10; ++draw) {
      const Index n = 3 + draw % 2;
      const ManyBodyHamiltonian h = random_hamiltonian(n, rng);
      const CovarianceMatrix g = random_gamma(n, rng);
      const NonGaussianParams w(random_omega(n, rng));
      const RMatrix grad = energy_gradient_omega(g, w, h);
      const RMatrix d = dtau_omega_hitgd(b_tensor(g), grad);
      CHECK((d - d.transpose()).norm() == 0.0);
      CHECK(d.diagonal().norm() == 0.0);
      const double residual = trace_o_squared(g, d) / 8.0 + (grad.array() * d.array()).sum();
      CHECK(std::abs(residual) < 1e-10);
      // the omega part of dE/dtau is then -(1/8) tr(O^2) <= 0
      CHECK((grad.array() * d.array()).sum() <= 1e-12);
    }
  }

  TEST_CASE("simple update") {
    RMatrix grad = RMatrix::Zero(2, 2);
    grad(0, 1) = grad(1, 0) = 0.5;
    CHECK(dtau_omega_simple(grad, 2.0)(0, 1) == doctest::Approx(-0.25));
    CHECK_THROWS_AS(dtau_omega_simple(grad, 0.0), ValidationError);
  }

  TEST_CASE("covariance flow is tangent to the pure manifold") {
    std::mt19937_64 rng(54);
    for (int draw = 0; draw < 10; ++draw) {
      const Index n = 3;
      const CovarianceMatrix g = random_gamma(n, rng);
      const RMatrix hm = random_skew(2 * n, rng);
      const CMatrix o = mean_field_o(g, random_omega(n, rng));
      const RMatrix d = dtau_gamma(g, hm, o);
      CHECK(skew_deviation(d) < 1e-12);
      // d(Gamma^2) = Gamma d + d Gamma vanishes on the tangent space
      CHECK((g.gamma() * d + d * g.gamma()).norm() < 1e-10);
    }
    const CovarianceMatrix vac = CovarianceMatrix::vacuum(2);
    CHECK(dtau_gamma(vac, RMatrix::Zero(4, 4), CMatrix::Zero(4, 4)).norm() == 0.0);
  }

  TEST_CASE("energy derivative along the flow is non-positive") {
    std::mt19937_64 rng(55);
    for (int draw = 0; draw < 5; ++draw) {
      const Index n = 3;
      const ManyBodyHamiltonian h = random_hamiltonian(n, rng);
      const CovarianceMatrix g = random_gamma(n, rng);
      const NonGaussianParams w(random_omega(n, rng, 0.5));
      const RMatrix grad = energy_gradient_omega(g, w, h);
      const RMatrix dw = dtau_omega_hitgd(b_tensor(g), grad);
      const RMatrix dg = dtau_gamma(g, mean_field_h(g, w, h), mean_field_o(g, dw));
      const double eps = 1e-6;
      const double ep = energy(CovarianceMatrix(g.gamma() + eps * dg),
                               NonGaussianParams(w.omega() + eps * dw), h).total;
      const double em = energy(CovarianceMatrix(g.gamma() - eps * dg),
                               NonGaussianParams(w.omega() - eps * dw), h).total;
      CHECK((ep - em) / (2.0 * eps) <= 1e-8);
    }
  }

  TEST_CASE("symmetric mean-field state is stationary") {
    const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 4.0, 2.0, true);
    const OptimizerConfig config;
    const OptimizerState s = make_state(mean_field_covariance(h.f(), 2),
                                        NonGaussianParams::zero(4), h, config);
    CHECK(s.energy == doctest::Approx(-4.0).epsilon(1e-12));
    const StepResult r = step(s, h, config);
    CHECK(r.converged);
    CHECK(r.grad_norm < 1e-12);
  }

  TEST_CASE("steps never raise the energy") {
    const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 4.0, 2.0, true);
    OptimizerConfig config;
    OptimizerState s = make_state(broken_symmetry_start(h), NonGaussianParams::zero(4), h, config);
    const double e0 = s.energy;
    for (int k = 0; k < 20; ++k) {
      const StepResult r = step(s, h, config);
      REQUIRE_FALSE(r.converged);
      if (k == 0) CHECK(r.state.energy < e0);
      CHECK(r.state.energy <= s.energy + 1e-12);
      CHECK(r.state.gamma.purity_error() < 1e-10);
      CHECK(r.state.tau > s.tau);
      s = r.state;
    }
  }

  TEST_CASE("simple update at the spectral bound also descends") {
    const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 4.0, 2.0, true);
    const CovarianceMatrix g = broken_symmetry_start(h);
    OptimizerConfig config;
    config.update = OmegaUpdate::Simple;
    config.simple_c = b_tensor(g).spectral_norm() / 8.0 * (1.0 + 1e-6);
    OptimizerState s = make_state(g, NonGaussianParams::zero(4), h, config);
    const double e0 = s.energy;
    for (int k = 0; k < 20; ++k) {
      const StepResult r = step(s, h, config);
      CHECK(r.state.energy <= s.energy + 1e-12);
      s = r.state;
    }
    CHECK(s.energy < e0);
  }

  TEST_CASE("run stays within the variational bounds") {
    const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 4.0, 2.0, true);
    std::mt19937_64 rng(56);
    OptimizerConfig config;
    config.max_steps = 400;
    const OptimizerState init =
        make_state(rotate_covariance(mean_field_covariance(h.f(), 2),
                                     random_gaussian_params(4, rng, 0.3)),
                   NonGaussianParams::zero(4), h, config);
    const RunResult r = run(h, init, config);
    const double exact = dense_ground(h).energy;
    CHECK(r.state.energy >= exact - 1e-9);
    CHECK(r.state.energy <= init.energy);
    for (std::size_t k = 1; k < r.trajectory.size(); ++k) {
      CHECK(r.trajectory[k].energy <= r.trajectory[k - 1].energy + 1e-12);
    }
  }

  TEST_CASE("frozen omega stays at zero") {
    const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 4.0, 2.0, true);
    OptimizerConfig config;
    config.update = OmegaUpdate::Frozen;
    config.max_steps = 30;
    const RunResult r = run(h, make_state(mean_field_covariance(h.f(), 2),
                                          NonGaussianParams::zero(4), h, config),
                            config);
    CHECK(r.state.omega.omega().norm() == 0.0);
  }

  TEST_CASE("converged state is reported without moving") {
    // U = 0 mean-field state is exact; nothing left to descend
    const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 0.0, 0.0, false);
    OptimizerConfig config;
    config.tol_grad = 1e-8;
    const OptimizerState s = make_state(mean_field_covariance(h.f(), 2),
                                        NonGaussianParams::zero(4), h, config);
    const StepResult r = step(s, h, config);
    CHECK(r.converged);
    const RunResult run_result = run(h, s, config);
    CHECK(run_result.reason == StopReason::Gradient);
    CHECK(run_result.trajectory.empty());
  }

  TEST_CASE("step size floor raises stagnation") {
    const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 4.0, 2.0, true);
    OptimizerConfig config;
    config.energy_slack = -1.0;  // no step can satisfy this
    config.dtau_min = 1e-3;
    const OptimizerState s = make_state(broken_symmetry_start(h), NonGaussianParams::zero(4), h,
                                        config);
    CHECK_THROWS_AS(step(s, h, config), StagnationError);
  }
}
