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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../support.hpp"
#include "ngs/circuit.hpp"
#include "ngs/linalg.hpp"
#include "ngs/optimizer.hpp"
#include "ngs/oracle.hpp"
#include "ngs/wick.hpp"

using namespace ngs;
using ngs::testing::random_omega;
using ngs::testing::random_phases;
using ngs::testing::random_skew;
using ngs::testing::random_string;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const RMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct Draw {
  GaussianParams xi;
  CovarianceMatrix gamma;
};

Draw random_draw(Index n, std::mt19937_64& rng, double scale = 0.7) {
  GaussianParams xi = random_gaussian_params(n, rng, scale);
  CovarianceMatrix gamma = covariance_from_xi(xi);
  return {xi, gamma};
}

double dense_energy_at(const GaussianParams& xi, const RMatrix& omega,
                       const ManyBodyHamiltonian& h) {
  return dense_energy(dense_state(xi, NonGaussianParams(omega)), h).real();
}

// Majorana coefficients of a ladder operator: c = (A_j + i A_{N+j}) / 2,
// c^+ = (A_j - i A_{N+j}) / 2.
CVector majorana_coefficients(Ladder op, Index n) {
  CVector v = CVector::Zero(2 * n);
  v(op.mode) = 0.5;
  v(n + op.mode) = op.dagger ? -0.5 * kI : 0.5 * kI;
  return v;
}

// Pfaffian by expansion along the first row.
Complex pfaffian_expansion(const CMatrix& m) {
  const Index d = m.rows();
  if (d == 0) return 1.0;
  Complex sum = 0.0;
  for (Index j = 1; j < d; ++j) {
    std::vector<Index> keep;
    for (Index k = 1; k < d; ++k)
      if (k != j) keep.push_back(k);
    CMatrix minor(d - 2, d - 2);
    for (Index a = 0; a < d - 2; ++a)
      for (Index b = 0; b < d - 2; ++b) minor(a, b) = m(keep[a], keep[b]);
    sum += ((j % 2 == 1) ? 1.0 : -1.0) * m(0, j) * pfaffian_expansion(minor);
  }
  return sum;
}

// Classical Wick sum with two-point function <A_k A_l> = delta_kl - i G0_kl,
// where G0 = Gamma + Upsilon carries the correlations off the vacuum block.
Complex classical_wick(const CMatrix& g0, Index n, const OperatorString& s) {
  const RMatrix upsilon = symplectic_form(n);
  const CMatrix two_point =
      CMatrix::Identity(2 * n, 2 * n) - kI * (g0 - upsilon.cast<Complex>());
  const auto& f = s.factors();
  const auto len = static_cast<Index>(f.size());
  CMatrix m = CMatrix::Zero(len, len);
  for (Index a = 0; a < len; ++a) {
    for (Index b = a + 1; b < len; ++b) {
      m(a, b) = majorana_coefficients(f[a], n).transpose() * two_point *
                majorana_coefficients(f[b], n);
      m(b, a) = -m(a, b);
    }
  }
  return pfaffian_expansion(m);
}

// Pure Gaussian state with covariance Gamma: the top eigenvector of
// (i/4) sum_kl Gamma_kl A_k A_l.
CVector dense_from_covariance(const CovarianceMatrix& gamma) {
  const Index n = gamma.n_modes();
  const Index dim = Index{1} << n;
  CMatrix parent = CMatrix::Zero(dim, dim);
  for (Index b = 0; b < dim; ++b) {
    CVector e = CVector::Zero(dim);
    e(b) = 1.0;
    for (Index k = 0; k < 2 * n; ++k) {
      const CVector ak = apply_majorana(e, k, n);
      for (Index l = 0; l < 2 * n; ++l) {
        if (gamma.gamma()(k, l) == 0.0) continue;
        parent.col(b) += 0.25 * kI * gamma.gamma()(k, l) * apply_majorana(ak, l, n);
      }
    }
  }
  // apply_majorana(ak, l) is A_l A_k; relabelling gives -(i/4) sum Gamma A_k A_l.
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (parent + parent.adjoint()));
  return eig.eigenvectors().col(0);
}

Outcome criterion_wick_vs_dense() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (Index n : {2, 3, 4}) {
    for (int draw = 0; draw < 50; ++draw) {
      const Draw d = random_draw(n, rng);
      const DenseState state = dense_state(d.xi, NonGaussianParams::zero(n));
      const PhaseVector alpha = random_phases(n, rng);
      const WickContext ctx(d.gamma, alpha);
      for (std::size_t len : {0, 2, 4, 6}) {
        for (int k = 0; k < 20; ++k) {
          const OperatorString s = random_string(n, len, rng);
          worst = std::max(worst, std::abs(ctx.expectation(s) - dense_expectation(state, alpha, s)));
        }
      }
    }
  }
  return {worst < 1e-9, fmt("max |wick - dense| = %.2e (tol 1e-9)", worst)};
}

Outcome criterion_plain_wick() {
  std::mt19937_64 rng(102);
  double worst_g = 0.0;
  double worst_e = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const Index n = 2 + draw % 3;
    const Draw d = random_draw(n, rng);
    const CMatrix g0 = (d.gamma.gamma() + symplectic_form(n)).cast<Complex>();
    const WickContext ctx(d.gamma, PhaseVector::zero(n));
    worst_g = std::max(worst_g, max_abs(CMatrix(ctx.g() - g0)));
    for (std::size_t len : {2, 4, 6}) {
      for (int k = 0; k < 10; ++k) {
        const OperatorString s = random_string(n, len, rng);
        const Complex ref = classical_wick(g0, n, s);
        worst_e = std::max(worst_e, std::abs(ctx.expectation(s) - ref));
        worst_e = std::max(worst_e, std::abs(plain_wick_expectation(d.gamma, s) - ref));
      }
    }
  }
  const double worst = std::max(worst_g, worst_e);
  return {worst < 1e-12,
          fmt("max |G - (Gamma+Upsilon)| = %.2e, max |wick - classical| = %.2e (tol 1e-12)",
              worst_g, worst_e)};
}

Outcome criterion_energy() {
  const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 4.0, 2.0, true);
  std::mt19937_64 rng(103);
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const Draw d = random_draw(4, rng);
    const RMatrix w = random_omega(4, rng, kPi);
    const double e = energy(d.gamma, NonGaussianParams(w), h).total;
    worst = std::max(worst, std::abs(e - dense_energy_at(d.xi, w, h)));
  }
  return {worst < 1e-10, fmt("max |E - E_dense| = %.2e (tol 1e-10)", worst)};
}

Outcome criterion_gradient() {
  std::mt19937_64 rng(104);
  const double eps = 1e-5;
  double worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const ManyBodyHamiltonian h = random_hamiltonian(4, rng);
    const Draw d = random_draw(4, rng);
    const RMatrix w = random_omega(4, rng, kPi);
    const RMatrix grad = energy_gradient_omega(d.gamma, NonGaussianParams(w), h);
    RMatrix fd = RMatrix::Zero(4, 4);
    for (Index i = 0; i < 4; ++i) {
      for (Index j = i + 1; j < 4; ++j) {
        RMatrix wp = w, wm = w;
        wp(i, j) += eps;
        wp(j, i) += eps;
        wm(i, j) -= eps;
        wm(j, i) -= eps;
        // A symmetric shift moves both entries, hence half the difference quotient.
        fd(i, j) = fd(j, i) =
            0.5 * (dense_energy_at(d.xi, wp, h) - dense_energy_at(d.xi, wm, h)) / (2.0 * eps);
      }
    }
    worst = std::max(worst, max_abs(RMatrix(grad - fd)) / std::max(max_abs(fd), 1e-300));
  }
  return {worst < 1e-6, fmt("max relative deviation = %.2e (tol 1e-6)", worst)};
}

Outcome criterion_mean_field_h() {
  std::mt19937_64 rng(105);
  const double eps = 1e-5;
  double worst = 0.0;
  double worst_skew = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const Index n = 3 + inst % 2;
    const ManyBodyHamiltonian h = random_hamiltonian(n, rng);
    const Draw d = random_draw(n, rng);
    const NonGaussianParams w(random_omega(n, rng, kPi));
    const RMatrix hm = mean_field_h(d.gamma, w, h);
    worst_skew = std::max(worst_skew, max_abs(RMatrix(hm + hm.transpose())));
    // Structured derivative X_ij is half the directional derivative along
    // e_ij - e_ji.
    RMatrix x = RMatrix::Zero(2 * n, 2 * n);
    for (Index i = 0; i < 2 * n; ++i) {
      for (Index j = i + 1; j < 2 * n; ++j) {
        RMatrix dir = RMatrix::Zero(2 * n, 2 * n);
        dir(i, j) = 1.0;
        dir(j, i) = -1.0;
        const double ep = energy(CovarianceMatrix(d.gamma.gamma() + eps * dir), w, h).total;
        const double em = energy(CovarianceMatrix(d.gamma.gamma() - eps * dir), w, h).total;
        x(i, j) = 0.5 * (ep - em) / (2.0 * eps);
        x(j, i) = -x(i, j);
      }
    }
    const RMatrix ref = 4.0 * x;
    worst = std::max(worst, max_abs(RMatrix(hm - ref)) / std::max(max_abs(ref), 1e-300));
  }
  return {worst < 1e-6 && worst_skew < 1e-9,
          fmt("max relative deviation = %.2e (tol 1e-6), max |H + H^T| = %.2e (tol 1e-9)",
              worst, worst_skew)};
}

Outcome criterion_b_tensor() {
  std::mt19937_64 rng(106);
  double worst = 0.0;
  double worst_alt = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const Index n = 2 + draw % 4;
    const Draw d = random_draw(n, rng);
    const RMatrix dw = random_omega(n, rng);
    const CMatrix o = mean_field_o(d.gamma, dw);
    const double tr = (o * o).trace().real();
    const double q = b_tensor(d.gamma).quadratic_form(dw);
    worst = std::max(worst, std::abs(q - tr));
    // O assembled from derivatives of <c_k^+ c_l^+ c_k c_l>.
    const WickContext ctx(d.gamma, PhaseVector::zero(n));
    CMatrix o_alt = CMatrix::Zero(2 * n, 2 * n);
    for (Index k = 0; k < n; ++k) {
      for (Index l = 0; l < n; ++l) {
        if (k == l) continue;
        const OperatorString s({create(k), create(l), annihilate(k), annihilate(l)});
        o_alt += -2.0 * kI * dw(k, l) * ctx.expectation_with_derivative(s).d_gamma;
      }
    }
    worst_alt = std::max(worst_alt, std::abs(q - (o_alt * o_alt).trace().real()));
  }
  const double w = std::max(worst, worst_alt);
  return {w < 1e-10, fmt("max |B(d,d) - tr(O^2)| = %.2e, via Wick derivatives %.2e (tol 1e-10)",
                         worst, worst_alt)};
}

Outcome criterion_hitgd() {
  std::mt19937_64 rng(107);
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const Index n = 3 + inst % 2;
    const ManyBodyHamiltonian h = random_hamiltonian(n, rng);
    const Draw d = random_draw(n, rng);
    const NonGaussianParams w(random_omega(n, rng, kPi));
    const RMatrix grad = energy_gradient_omega(d.gamma, w, h);
    const RMatrix dw = dtau_omega_hitgd(b_tensor(d.gamma), grad);
    const CMatrix o = mean_field_o(d.gamma, dw);
    const double residual = 0.125 * (o * o).trace().real() + (grad.array() * dw.array()).sum();
    worst = std::max(worst, std::abs(residual));
  }
  return {worst < 1e-10, fmt("max residual = %.2e (tol 1e-10)", worst)};
}

Outcome criterion_optimization() {
  const ManyBodyHamiltonian h = hubbard_model(2, 1.0, 4.0, 2.0, true);
  const double exact = dense_ground(h).energy;
  const CovarianceMatrix mf = mean_field_covariance(h.f(), 2);
  const double e_mf = energy(mf, NonGaussianParams::zero(4), h).total;
  // The symmetric mean-field state is stationary; start slightly off it.
  std::mt19937_64 rng(1);
  const CovarianceMatrix start = rotate_covariance(mf, random_gaussian_params(4, rng, 0.1));

  OptimizerConfig config;
  config.tol_grad = 0.0;
  config.tol_energy = 0.0;
  config.max_steps = 4000;
  const OptimizerState init = make_state(start, NonGaussianParams::zero(4), h, config);
  const RunResult ngs = run(h, init, config);
  OptimizerConfig frozen = config;
  frozen.update = OmegaUpdate::Frozen;
  const RunResult gauss = run(h, init, frozen);

  double worst_rise = 0.0;
  double prev = init.energy;
  for (const TrajectoryRecord& r : ngs.trajectory) {
    worst_rise = std::max(worst_rise, r.energy - prev);
    prev = r.energy;
  }
  const std::size_t steps = ngs.trajectory.size();
  const double e = ngs.state.energy;
  const bool bounded = e >= exact - 1e-9 && e <= init.energy && e <= e_mf;
  const bool beats = e <= gauss.state.energy + 1e-9;

  DenseState opt;
  opt.amplitudes =
      flux_diagonal(ngs.state.omega).cwiseProduct(dense_from_covariance(ngs.state.gamma));
  const double ov = overlap(opt, dense_ground(h).state);

  const bool pass = steps >= 200 && worst_rise <= 1e-12 && bounded && beats;
  std::string detail = fmt("steps = %.0f, max rise = %.2e (tol 1e-12), ", static_cast<double>(steps),
                           worst_rise);
  detail += fmt("E_ngs = %.10f, E_gauss = %.10f, E_exact = %.6f, ", e, gauss.state.energy, exact);
  detail += fmt("E_init = %.6f, E_mf = %.6f, ", init.energy, e_mf);
  detail += fmt("|<ngs|exact>| = %.6f", ov);
  return {pass, detail};
}

Outcome criterion_miller() {
  std::mt19937_64 rng(109);
  double worst = 0.0;
  bool used_fast = true;
  for (int draw = 0; draw < 30; ++draw) {
    const Index n = 2 + draw % 4;
    const Draw d = random_draw(n, rng);
    const PhaseVector a = random_phases(n, rng);
    bool separated = true;
    for (Index j = 0; j < n; ++j) separated &= std::abs(1.0 - std::exp(kI * a(j))) > 1e-12;
    if (!separated) continue;
    const WickContext fast(d.gamma, a, InversePath::Miller);
    const WickContext direct(d.gamma, a, InversePath::Direct);
    worst = std::max(worst, max_abs(CMatrix(fast.g() - direct.g())));
    worst = std::max(worst, max_abs(CMatrix(fast.q() - direct.q())));
    used_fast &= fast.g_used_miller() && fast.q_used_miller();
  }

  double worst_fb = 0.0;
  bool fell_back = true;
  for (int draw = 0; draw < 30; ++draw) {
    const Index n = 2 + draw % 4;
    const Draw d = random_draw(n, rng);
    RVector a = random_phases(n, rng).values();
    a(draw % n) = 0.0;
    if (draw % 3 == 0) a((draw + 1) % n) = 0.0;
    const PhaseVector alpha(a);
    const WickContext automatic(d.gamma, alpha);
    const WickContext direct(d.gamma, alpha, InversePath::Direct);
    worst_fb = std::max(worst_fb, max_abs(CMatrix(automatic.g() - direct.g())));
    worst_fb = std::max(worst_fb, max_abs(CMatrix(automatic.q() - direct.q())));
    fell_back &= !automatic.g_used_miller() && !automatic.q_used_miller();
    const DenseState state = dense_state(d.xi, NonGaussianParams::zero(n));
    const OperatorString s = random_string(n, 4, rng);
    worst_fb = std::max(worst_fb, std::abs(automatic.expectation(s) -
                                           dense_expectation(state, alpha, s)));
  }
  const bool pass = worst < 1e-10 && used_fast && worst_fb < 1e-10 && fell_back;
  return {pass, fmt("max |miller - direct| = %.2e (tol 1e-10), fallback deviation = %.2e, ",
                    worst, worst_fb) +
                    std::string("fast path used: ") + (used_fast ? "yes" : "no") +
                    ", fallback taken: " + (fell_back ? "yes" : "no")};
}

Outcome criterion_circuit() {
  std::mt19937_64 rng(110);
  const Index n = 4;
  double worst = 0.0;
  bool counts = true;
  for (int draw = 0; draw < 20; ++draw) {
    const NonGaussianParams w(random_omega(n, rng, kPi));
    const GateList gl = emit_ufa(w);
    counts &= gl.rz_count() == static_cast<std::size_t>(n) &&
              gl.zz_count() == static_cast<std::size_t>(n * (n - 1) / 2);
    const CVector exact = flux_diagonal(w);
    // Gate product with Z = 2n - 1 per mode, evaluated independently.
    CVector diag(Index{1} << n);
    for (Index b = 0; b < diag.size(); ++b) {
      auto z = [b](Index j) { return ((b >> j) & 1) ? 1.0 : -1.0; };
      double phase = gl.global_phase;
      for (const Gate& g : gl.gates)
        phase += g.kind == Gate::Kind::Rz ? g.angle * z(g.a) : g.angle * z(g.a) * z(g.b);
      diag(b) = std::exp(kI * phase);
    }
    worst = std::max(worst, (diag - exact).cwiseAbs().maxCoeff());
    const CVector qasm = std::exp(kI * gl.global_phase) * simulate_qasm(to_qasm(gl));
    worst = std::max(worst, (qasm - exact).cwiseAbs().maxCoeff());
    worst = std::max(worst, verify_dense(gl, w));
  }
  return {worst < 1e-10 && counts,
          fmt("max deviation = %.2e (tol 1e-10), ", worst) +
              "counts " + (counts ? "N Rz and N(N-1)/2 ZZ" : "wrong")};
}

Outcome criterion_pfaffian() {
  std::mt19937_64 rng(111);
  double worst = 0.0;
  for (int draw = 0; draw < 200; ++draw) {
    const Index d = 2 * (1 + draw % 6);
    const RMatrix m = random_skew(d, rng);
    const Complex pf = pfaffian(CMatrix(m.cast<Complex>()));
    const double det = m.determinant();
    worst = std::max(worst, std::abs(pf * pf - det) / std::max(std::abs(det), 1e-300));
  }
  double worst_a = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const Index n = 1 + draw % 6;
    const Draw dr = random_draw(n, rng);
    worst_a = std::max(worst_a, std::abs(a_coeff(dr.gamma, PhaseVector::zero(n)) - 1.0));
  }
  return {worst < 1e-10 && worst_a < 1e-12,
          fmt("max |Pf^2 - det| / |det| = %.2e (tol 1e-10), max |A0 - 1| = %.2e (tol 1e-12)",
              worst, worst_a)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
    double budget_s;
  };
  const std::vector<Criterion> criteria = {
      {"generalized Wick vs dense oracle", criterion_wick_vs_dense, 120.0},
      {"plain Wick reduction at zero phase", criterion_plain_wick, 0.0},
      {"energy functional vs dense", criterion_energy, 30.0},
      {"omega gradient vs finite differences", criterion_gradient, 0.0},
      {"mean-field H vs finite differences", criterion_mean_field_h, 0.0},
      {"B tensor quadratic form equals tr(O^2)", criterion_b_tensor, 0.0},
      {"HITGD cancellation", criterion_hitgd, 0.0},
      {"monotone optimization on two-site Hubbard", criterion_optimization, 300.0},
      {"Miller fast path and fallback", criterion_miller, 0.0},
      {"flux circuit fidelity and gate counts", criterion_circuit, 0.0},
      {"Pfaffian and overlap coefficient", criterion_pfaffian, 0.0},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
      out = criteria[i].fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criteria[i].budget_s > 0.0 && secs > criteria[i].budget_s) {
      out.pass = false;
      out.detail += fmt(", over time budget %.0f s", criteria[i].budget_s);
    }
    std::printf("[%s] %2zu %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
