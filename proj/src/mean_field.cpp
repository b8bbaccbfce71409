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

#include <sstream>

#include "ngs/hamiltonian.hpp"
#include "ngs/parallel.hpp"

namespace ngs {

RMatrix mean_field_h(const CovarianceMatrix& gamma, const NonGaussianParams& omega,
                     const ManyBodyHamiltonian& h, const EvalOptions& options) {
  const Index n = h.n_modes();
  if (gamma.n_modes() != n) {
    throw DimensionError("covariance and Hamiltonian have different mode counts");
  }
  const Index d = 2 * n;
  const RotatedCoefficients rot(h, omega);
  const auto& one = h.one_body_terms();
  const auto& two = h.two_body_terms();
  const std::size_t total = one.size() + two.size();
  const CMatrix derivative = parallel_reduce(
      total, options.threads, CMatrix(CMatrix::Zero(d, d)),
      [&](std::size_t begin, std::size_t end) {
        CMatrix acc = CMatrix::Zero(d, d);
        for (std::size_t k = begin; k < end; ++k) {
          try {
            if (k < one.size()) {
              const auto& t = one[k];
              const WickContext ctx(gamma, rot.alpha(t.p, t.q), options.path);
              const auto vd = ctx.expectation_with_derivative(
                  OperatorString({create(t.p), annihilate(t.q)}));
              acc += rot.f_fa(t.p, t.q) * vd.d_gamma;
            } else {
              const auto& t = two[k - one.size()];
              const WickContext ctx(gamma, rot.beta(t.p, t.q, t.r, t.s), options.path);
              const auto vd = ctx.expectation_with_derivative(OperatorString(
                  {create(t.p), create(t.q), annihilate(t.r), annihilate(t.s)}));
              acc += (0.5 * rot.h_fa(t.p, t.q, t.r, t.s)) * vd.d_gamma;
            }
          } catch (const SingularContractionError& e) {
            std::ostringstream msg;
            msg << "mean-field term " << k << ": " << e.what();
            throw SingularContractionError(msg.str());
          }
        }
        return acc;
      },
      [](CMatrix a, const CMatrix& b) {
        a += b;
        return a;
      });
  RMatrix hm = 4.0 * derivative.real();
  return 0.5 * (hm - hm.transpose());
}

CMatrix mean_field_o(const CovarianceMatrix& gamma, const RMatrix& dtau_omega) {
  const Index n = gamma.n_modes();
  if (dtau_omega.rows() != n || dtau_omega.cols() != n) {
    throw DimensionError("dtau_omega has the wrong shape");
  }
  const RMatrix& g_full = gamma.gamma();
  RMatrix g0 = g_full + symplectic_form(n);
  RVector g(n);
  for (Index j = 0; j < n; ++j) g(j) = g_full(j, n + j) + 1.0;
  const RVector x = dtau_omega * g;

  // O = (i/2) R with R real
  RMatrix real_part = RMatrix::Zero(2 * n, 2 * n);
  for (Index j = 0; j < n; ++j) {
    real_part(j, n + j) = x(j);
    real_part(n + j, j) = -x(j);
  }
  const auto g11 = g0.topLeftCorner(n, n);
  const auto g12 = g0.topRightCorner(n, n);
  const auto g21 = g0.bottomLeftCorner(n, n);
  const auto g22 = g0.bottomRightCorner(n, n);
  real_part.topLeftCorner(n, n) += dtau_omega.cwiseProduct(-g22);
  real_part.topRightCorner(n, n) += dtau_omega.cwiseProduct(g21);
  real_part.bottomLeftCorner(n, n) += dtau_omega.cwiseProduct(g12);
  real_part.bottomRightCorner(n, n) += dtau_omega.cwiseProduct(-g11);
  return (0.5 * kI) * real_part.cast<Complex>();
}

}  // namespace ngs
