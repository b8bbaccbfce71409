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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ngs/gaussian.hpp"
#include "ngs/hamiltonian.hpp"

namespace ngs {

/// Metric tensor of the omega update: tr(O_m(d)^2) = sum_klmn d_kl B_klmn d_mn.
class BTensor {
 public:
  BTensor(Index n_modes, std::vector<double> entries, RVector g);

  Index n_modes() const { return n_; }
  const RVector& g() const { return g_; }
  double operator()(Index k, Index l, Index m, Index n) const {
    return entries_[static_cast<std::size_t>(((k * n_ + l) * n_ + m) * n_ + n)];
  }

  /// Restriction to pairs k < l (row-major), N(N-1)/2 square.
  RMatrix reduced() const;

  /// sum_klmn d_kl B_klmn d_mn
  double quadratic_form(const RMatrix& d) const;

  /// Spectral norm of the full N^2 x N^2 flattening.
  double spectral_norm() const;

 private:
  Index n_;
  std::vector<double> entries_;
  RVector g_;
};

BTensor b_tensor(const CovarianceMatrix& gamma);

/// Pair (k, l), k < l, to its reduced index and back.
std::vector<std::pair<Index, Index>> omega_pairs(Index n_modes);

/// Update solving (1/8) sum_mn B_klmn d_mn = -grad_kl in the least-squares
/// sense on the symmetric zero-diagonal subspace (pseudo-inverse, rcond
/// 1e-12).
RMatrix dtau_omega_hitgd(const BTensor& b, const RMatrix& grad);

/// -grad / c; throws ValidationError unless c > 0.
RMatrix dtau_omega_simple(const RMatrix& grad, double c);

/// dGamma = -H - Gamma H Gamma + i [Gamma, O].
RMatrix dtau_gamma(const CovarianceMatrix& gamma, const RMatrix& h_m, const CMatrix& o_m);

enum class OmegaUpdate { Hitgd, Simple, Frozen };

struct OptimizerConfig {
  OmegaUpdate update = OmegaUpdate::Hitgd;
  double simple_c = 1.0;
  double dtau_initial = 0.1;
  double dtau_min = 1e-8;
  double dtau_max = 1.0;
  double dtau_growth = 1.2;
  double energy_slack = 1e-12;
  double tol_grad = 1e-7;
  double tol_energy = 1e-11;
  int patience = 10;
  int max_steps = 5000;
  EvalOptions eval;
};

struct OptimizerState {
  CovarianceMatrix gamma;
  NonGaussianParams omega;
  double tau = 0.0;
  double energy = 0.0;
  double step_size = 0.1;
};

/// State at (gamma, omega) with its energy evaluated.
OptimizerState make_state(const CovarianceMatrix& gamma, const NonGaussianParams& omega,
                          const ManyBodyHamiltonian& h, const OptimizerConfig& config);

struct StepResult {
  OptimizerState state;
  double grad_norm = 0.0;
  double dtau = 0.0;
  int backtracks = 0;
  bool converged = false;  // grad_norm below tolerance; state unchanged
};

/// One guarded forward-Euler step. Throws StagnationError when the step
/// size would fall below dtau_min.
StepResult step(const OptimizerState& state, const ManyBodyHamiltonian& h,
                const OptimizerConfig& config);

struct TrajectoryRecord {
  int step = 0;
  double tau = 0.0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double dtau = 0.0;
  double purity_err = 0.0;
  double wall_ms = 0.0;
};

enum class StopReason { Gradient, EnergyPlateau, MaxSteps };

struct RunResult {
  OptimizerState state;
  std::vector<TrajectoryRecord> trajectory;
  StopReason reason = StopReason::MaxSteps;
};

using TrajectoryCallback = std::function<void(const TrajectoryRecord&)>;

RunResult run(const ManyBodyHamiltonian& h, OptimizerState initial,
              const OptimizerConfig& config, const TrajectoryCallback& on_record = {});

std::string to_string(StopReason reason);

}  // namespace ngs
