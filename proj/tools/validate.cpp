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

#include "validate.hpp"

#include <algorithm>
#include <random>

#include "ngs/circuit.hpp"
#include "ngs/optimizer.hpp"
#include "ngs/oracle.hpp"

namespace ngs::cli {

namespace {

RMatrix random_symmetric(Index n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RMatrix w = RMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) w(i, j) = w(j, i) = u(rng);
  return w;
}

RMatrix random_skew(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RMatrix m = RMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      m(i, j) = g(rng);
      m(j, i) = -m(i, j);
    }
  return m;
}

OperatorString random_string(Index n, std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> mode(0, n - 1);
  std::bernoulli_distribution dag(0.5);
  std::vector<Ladder> f;
  for (std::size_t k = 0; k < length; ++k) f.push_back({mode(rng), dag(rng)});
  return OperatorString(std::move(f));
}

double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& opt,
                                        const std::optional<ManyBodyHamiltonian>& fixed) {
  const Index n = opt.n_modes;
  if (n < 2 || n > kMaxOracleDenseModes) {
    throw ConfigError("validate needs 2 <= modes <= " + std::to_string(kMaxOracleDenseModes));
  }
  if (fixed && fixed->n_modes() != n) {
    throw ConfigError("Hamiltonian mode count differs from --modes");
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  const EvalOptions eval{opt.threads, InversePath::Auto};
  double wick = 0.0, energy_dev = 0.0, grad_dev = 0.0, hm_dev = 0.0, hm_skew = 0.0;
  double b_dev = 0.0, circuit_dev = 0.0, miller_dev = 0.0;

  for (int draw = 0; draw < opt.draws; ++draw) {
    const GaussianParams xi = random_gaussian_params(n, rng, 0.7);
    const CovarianceMatrix gamma = covariance_from_xi(xi);
    const DenseState plain = dense_state(xi, NonGaussianParams::zero(n));
    RVector a(n);
    for (Index j = 0; j < n; ++j) a(j) = phase(rng);
    const PhaseVector alpha(a);
    const WickContext direct(gamma, alpha, InversePath::Direct);
    for (std::size_t len : {0u, 2u, 4u, 6u}) {
      for (int k = 0; k < 5; ++k) {
        const OperatorString s = random_string(n, len, rng);
        wick = std::max(wick, std::abs(direct.expectation(s) -
                                       dense_expectation(plain, alpha, s)));
      }
    }
    const WickContext fast(gamma, alpha, InversePath::Miller);
    miller_dev = std::max(miller_dev, (fast.g() - direct.g()).cwiseAbs().maxCoeff());
    miller_dev = std::max(miller_dev, (fast.q() - direct.q()).cwiseAbs().maxCoeff());

    const ManyBodyHamiltonian h = fixed ? *fixed : random_hamiltonian(n, rng);
    const NonGaussianParams omega(random_symmetric(n, rng, 1.5));
    const double e = energy(gamma, omega, h, eval).total;
    const double e_dense = dense_energy(dense_state(xi, omega), h).real();
    energy_dev = std::max(energy_dev, relative(e, e_dense));

    const RMatrix grad = energy_gradient_omega(gamma, omega, h, eval);
    const double eps = 1e-5;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        RMatrix wp = omega.omega(), wm = omega.omega();
        wp(i, j) += eps;
        wp(j, i) += eps;
        wm(i, j) -= eps;
        wm(j, i) -= eps;
        const double fd = (dense_energy(dense_state(xi, NonGaussianParams(wp)), h).real() -
                           dense_energy(dense_state(xi, NonGaussianParams(wm)), h).real()) /
                          (2.0 * eps);
        grad_dev = std::max(grad_dev, relative(2.0 * grad(i, j), fd));
      }
    }

    const RMatrix hm = mean_field_h(gamma, omega, h, eval);
    hm_skew = std::max(hm_skew, skew_deviation(hm));
    for (int dir = 0; dir < 3; ++dir) {
      const RMatrix d = random_skew(2 * n, rng);
      const double fd = (energy(CovarianceMatrix(gamma.gamma() + eps * d), omega, h, eval).total -
                         energy(CovarianceMatrix(gamma.gamma() - eps * d), omega, h, eval).total) /
                        (2.0 * eps);
      hm_dev = std::max(hm_dev, relative(0.25 * (hm.array() * d.array()).sum(), fd));
    }

    const RMatrix dw = random_symmetric(n, rng, 1.0);
    const CMatrix o = mean_field_o(gamma, dw);
    b_dev = std::max(b_dev, std::abs(b_tensor(gamma).quadratic_form(dw) - (o * o).trace().real()));

    circuit_dev = std::max(circuit_dev, verify_dense(emit_ufa(omega), omega));
  }

  return {{"wick-vs-dense", wick, 1e-9},
          {"miller-vs-direct", miller_dev, 1e-10},
          {"energy-vs-dense", energy_dev, 1e-10},
          {"omega-gradient-vs-fd", grad_dev, 1e-6},
          {"mean-field-h-vs-fd", hm_dev, 1e-6},
          {"mean-field-h-skew", hm_skew, 1e-9},
          {"b-tensor-vs-trace", b_dev, 1e-10},
          {"circuit-vs-dense", circuit_dev, 1e-10}};
}

}  // namespace ngs::cli
