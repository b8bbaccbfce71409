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

#include "ngs/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "ngs/linalg.hpp"

namespace ngs {

BTensor::BTensor(Index n_modes, std::vector<double> entries, RVector g)
    : n_(n_modes), entries_(std::move(entries)), g_(std::move(g)) {
  if (entries_.size() != static_cast<std::size_t>(n_ * n_ * n_ * n_) || g_.size() != n_) {
    throw DimensionError("B tensor has inconsistent dimensions");
  }
}

std::vector<std::pair<Index, Index>> omega_pairs(Index n_modes) {
  std::vector<std::pair<Index, Index>> pairs;
  for (Index k = 0; k < n_modes; ++k) {
    for (Index l = k + 1; l < n_modes; ++l) pairs.emplace_back(k, l);
  }
  return pairs;
}

RMatrix BTensor::reduced() const {
  const auto pairs = omega_pairs(n_);
  const auto np = static_cast<Index>(pairs.size());
  RMatrix r(np, np);
  for (Index a = 0; a < np; ++a) {
    for (Index b = 0; b < np; ++b) {
      r(a, b) = (*this)(pairs[a].first, pairs[a].second, pairs[b].first, pairs[b].second);
    }
  }
  return r;
}

double BTensor::quadratic_form(const RMatrix& d) const {
  if (d.rows() != n_ || d.cols() != n_) throw DimensionError("quadratic form shape");
  double sum = 0.0;
  for (Index k = 0; k < n_; ++k)
    for (Index l = 0; l < n_; ++l)
      for (Index m = 0; m < n_; ++m)
        for (Index n = 0; n < n_; ++n) sum += d(k, l) * (*this)(k, l, m, n) * d(m, n);
  return sum;
}

double BTensor::spectral_norm() const {
  if (n_ < 2) return 0.0;
  // The full flattening acts as 2 B_reduced on symmetric zero-diagonal
  // matrices and annihilates everything else.
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(reduced(), Eigen::EigenvaluesOnly);
  return 2.0 * eig.eigenvalues().cwiseAbs().maxCoeff();
}

BTensor b_tensor(const CovarianceMatrix& gamma) {
  const Index n = gamma.n_modes();
  const RMatrix& gm = gamma.gamma();
  const RMatrix g0 = gm + symplectic_form(n);
  RVector g(n);
  for (Index j = 0; j < n; ++j) g(j) = gm(j, n + j) + 1.0;
  const RMatrix ggt = g * g.transpose();
  RMatrix s(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      s(k, l) = g0(k, l) * g0(k, l) + g0(k, n + l) * g0(k, n + l) +
                g0(n + k, l) * g0(n + k, l) + g0(n + k, n + l) * g0(n + k, n + l);
    }
  }
  auto delta = [](Index a, Index b) { return a == b ? 1.0 : 0.0; };
  std::vector<double> e(static_cast<std::size_t>(n * n * n * n), 0.0);
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      if (k == l) continue;
      for (Index m = 0; m < n; ++m) {
        for (Index q = 0; q < n; ++q) {
          if (m == q) continue;
          const double first = ggt(l, m) * delta(q, k) + ggt(l, q) * delta(m, k) +
                               ggt(k, m) * delta(q, l) + ggt(k, q) * delta(m, l);
          const double second = s(k, l) * (delta(m, k) * delta(q, l) + delta(q, k) * delta(m, l));
          e[static_cast<std::size_t>(((k * n + l) * n + m) * n + q)] = (first + second) / 8.0;
        }
      }
    }
  }
  return BTensor(n, std::move(e), std::move(g));
}

RMatrix dtau_omega_hitgd(const BTensor& b, const RMatrix& grad) {
  const Index n = b.n_modes();
  if (grad.rows() != n || grad.cols() != n) throw DimensionError("gradient shape");
  const auto pairs = omega_pairs(n);
  const auto np = static_cast<Index>(pairs.size());
  RMatrix d = RMatrix::Zero(n, n);
  if (np == 0) return d;
  RVector g(np);
  for (Index a = 0; a < np; ++a) g(a) = grad(pairs[a].first, pairs[a].second);
  // Over ordered pairs the condition reads (1/2) x.Br.x + 2 g.x = 0.
  const RVector x = -4.0 * (pseudo_inverse(b.reduced()) * g);
  for (Index a = 0; a < np; ++a) {
    d(pairs[a].first, pairs[a].second) = x(a);
    d(pairs[a].second, pairs[a].first) = x(a);
  }
  return d;
}

RMatrix dtau_omega_simple(const RMatrix& grad, double c) {
  if (!(c > 0.0)) throw ValidationError("simple update requires c > 0");
  return -grad / c;
}

RMatrix dtau_gamma(const CovarianceMatrix& gamma, const RMatrix& h_m, const CMatrix& o_m) {
  const RMatrix& g = gamma.gamma();
  if (h_m.rows() != g.rows() || o_m.rows() != g.rows()) {
    throw DimensionError("mean-field matrices do not match the covariance");
  }
  const RMatrix io = (kI * o_m).real();
  RMatrix d = -h_m - g * h_m * g + (g * io - io * g);
  return 0.5 * (d - d.transpose());
}

OptimizerState make_state(const CovarianceMatrix& gamma, const NonGaussianParams& omega,
                          const ManyBodyHamiltonian& h, const OptimizerConfig& config) {
  const double e = energy(gamma, omega, h, config.eval).total;
  return {gamma, omega, 0.0, e, config.dtau_initial};
}

namespace {

RMatrix wrap_omega(const RMatrix& omega) {
  RMatrix w = omega;
  for (Index i = 0; i < w.rows(); ++i) {
    w(i, i) = 0.0;
    for (Index j = i + 1; j < w.cols(); ++j) {
      w(i, j) = wrap_phase(omega(i, j));
      w(j, i) = w(i, j);
    }
  }
  return w;
}

}  // namespace

StepResult step(const OptimizerState& state, const ManyBodyHamiltonian& h,
                const OptimizerConfig& config) {
  const Index n = h.n_modes();
  RMatrix grad = RMatrix::Zero(n, n);
  RMatrix d_omega = RMatrix::Zero(n, n);
  if (config.update != OmegaUpdate::Frozen) {
    grad = energy_gradient_omega(state.gamma, state.omega, h, config.eval);
    d_omega = config.update == OmegaUpdate::Hitgd
                  ? dtau_omega_hitgd(b_tensor(state.gamma), grad)
                  : dtau_omega_simple(grad, config.simple_c);
  }
  const CMatrix o_m = mean_field_o(state.gamma, d_omega);
  const RMatrix h_m = mean_field_h(state.gamma, state.omega, h, config.eval);
  const RMatrix d_gamma = dtau_gamma(state.gamma, h_m, o_m);

  StepResult result{state, 0.0, 0.0, 0, false};
  const double grad_max = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
  result.grad_norm = std::max(grad_max, d_gamma.cwiseAbs().maxCoeff());
  if (result.grad_norm < config.tol_grad) {
    result.converged = true;
    return result;
  }

  double dt = state.step_size;
  while (true) {
    if (dt < config.dtau_min) {
      std::ostringstream msg;
      msg << "step size fell below " << config.dtau_min << " at tau = " << state.tau;
      throw StagnationError(msg.str());
    }
    bool accepted = false;
    try {
      CovarianceMatrix gamma_new = purify(state.gamma.gamma() + dt * d_gamma);
      NonGaussianParams omega_new(wrap_omega(state.omega.omega() + dt * d_omega));
      const double e_new = energy(gamma_new, omega_new, h, config.eval).total;
      if (e_new <= state.energy + config.energy_slack) {
        result.state = OptimizerState{std::move(gamma_new), std::move(omega_new),
                                      state.tau + dt, e_new,
                                      std::min(dt * config.dtau_growth, config.dtau_max)};
        result.dtau = dt;
        accepted = true;
      }
    } catch (const DegeneracyError&) {
    } catch (const SingularContractionError&) {
    }
    if (accepted) return result;
    dt *= 0.5;
    ++result.backtracks;
  }
}

RunResult run(const ManyBodyHamiltonian& h, OptimizerState initial,
              const OptimizerConfig& config, const TrajectoryCallback& on_record) {
  RunResult out{std::move(initial), {}, StopReason::MaxSteps};
  const auto start = std::chrono::steady_clock::now();
  int quiet_steps = 0;
  for (int k = 1; k <= config.max_steps; ++k) {
    StepResult s = step(out.state, h, config);
    if (s.converged) {
      out.reason = StopReason::Gradient;
      return out;
    }
    const double delta_e = std::abs(s.state.energy - out.state.energy);
    out.state = std::move(s.state);
    TrajectoryRecord rec;
    rec.step = k;
    rec.tau = out.state.tau;
    rec.energy = out.state.energy;
    rec.grad_norm = s.grad_norm;
    rec.dtau = s.dtau;
    rec.purity_err = out.state.gamma.purity_error();
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    out.trajectory.push_back(rec);
    if (on_record) on_record(rec);
    quiet_steps = delta_e < config.tol_energy ? quiet_steps + 1 : 0;
    if (quiet_steps >= config.patience) {
      out.reason = StopReason::EnergyPlateau;
      return out;
    }
  }
  return out;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Gradient:
      return "gradient";
    case StopReason::EnergyPlateau:
      return "energy-plateau";
    case StopReason::MaxSteps:
      return "max-steps";
  }
  return "unknown";
}

}  // namespace ngs
