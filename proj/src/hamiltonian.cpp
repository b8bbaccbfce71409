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

#include "ngs/hamiltonian.hpp"

#include <cmath>
#include <sstream>

#include "ngs/linalg.hpp"
#include "ngs/parallel.hpp"

namespace ngs {

namespace {

constexpr double kSymmetryTolerance = 1e-10;

std::string tuple_name(std::initializer_list<Index> idx) {
  std::ostringstream msg;
  msg << "(";
  bool first = true;
  for (Index i : idx) {
    msg << (first ? "" : ",") << i + 1;
    first = false;
  }
  msg << ")";
  return msg.str();
}

[[noreturn]] void rethrow_for_term(const SingularContractionError& e,
                                   const std::string& tuple) {
  throw SingularContractionError("term " + tuple + ": " + e.what());
}

}  // namespace

ManyBodyHamiltonian::ManyBodyHamiltonian(Index n_modes, CMatrix f,
                                         std::vector<double> h_tensor)
    : n_(n_modes), f_(std::move(f)), h_(std::move(h_tensor)) {
  if (n_ < 1) throw DimensionError("n_modes must be positive");
  if (f_.rows() != n_ || f_.cols() != n_) {
    std::ostringstream msg;
    msg << "one-body tensor must be " << n_ << "x" << n_;
    throw DimensionError(msg.str());
  }
  const auto n4 = static_cast<std::size_t>(n_ * n_ * n_ * n_);
  if (h_.size() != n4) {
    std::ostringstream msg;
    msg << "two-body tensor must have " << n4 << " entries, got " << h_.size();
    throw DimensionError(msg.str());
  }
  for (Index p = 0; p < n_; ++p) {
    for (Index q = 0; q < n_; ++q) {
      if (!std::isfinite(f_(p, q).real()) || !std::isfinite(f_(p, q).imag())) {
        throw ValidationError("one-body entry " + tuple_name({p, q}) + " is not finite");
      }
      if (std::abs(f_(p, q) - std::conj(f_(q, p))) > kSymmetryTolerance) {
        throw ValidationError("one-body tensor is not Hermitian at " +
                              tuple_name({p, q}));
      }
    }
  }
  for (Index p = 0; p < n_; ++p) {
    for (Index q = 0; q < n_; ++q) {
      for (Index r = 0; r < n_; ++r) {
        for (Index s = 0; s < n_; ++s) {
          const double v = h(p, q, r, s);
          if (!std::isfinite(v)) {
            throw ValidationError("two-body entry " + tuple_name({p, q, r, s}) +
                                  " is not finite");
          }
          const bool ok = std::abs(v + h(q, p, r, s)) <= kSymmetryTolerance &&
                          std::abs(v + h(p, q, s, r)) <= kSymmetryTolerance &&
                          std::abs(v - h(q, p, s, r)) <= kSymmetryTolerance &&
                          std::abs(v - h(s, r, q, p)) <= kSymmetryTolerance;
          if (!ok) {
            throw ValidationError("two-body tensor violates its symmetries at " +
                                  tuple_name({p, q, r, s}));
          }
        }
      }
    }
  }
  for (Index p = 0; p < n_; ++p) {
    for (Index q = 0; q < n_; ++q) {
      if (f_(p, q) != Complex{0.0, 0.0}) one_body_.push_back({p, q, f_(p, q)});
    }
  }
  for (Index p = 0; p < n_; ++p) {
    for (Index q = 0; q < n_; ++q) {
      for (Index r = 0; r < n_; ++r) {
        for (Index s = 0; s < n_; ++s) {
          const double v = h(p, q, r, s);
          if (v != 0.0) two_body_.push_back({p, q, r, s, v});
        }
      }
    }
  }
}

ManyBodyHamiltonian ManyBodyHamiltonian::zero(Index n_modes) {
  const auto n4 = static_cast<std::size_t>(n_modes * n_modes * n_modes * n_modes);
  return ManyBodyHamiltonian(n_modes, CMatrix::Zero(n_modes, n_modes),
                             std::vector<double>(n4, 0.0));
}

NonGaussianParams::NonGaussianParams(RMatrix omega) : omega_(std::move(omega)) {
  if (omega_.rows() != omega_.cols() || omega_.rows() < 1) {
    throw DimensionError("omega must be a non-empty square matrix");
  }
  if (!omega_.allFinite()) throw ValidationError("omega is not finite");
  const double asym = (omega_ - omega_.transpose()).cwiseAbs().maxCoeff();
  const double diag = omega_.diagonal().cwiseAbs().maxCoeff();
  if (asym > kStructureTolerance || diag > kStructureTolerance) {
    throw ValidationError("omega must be symmetric with zero diagonal");
  }
  omega_ = 0.5 * (omega_ + omega_.transpose()).eval();
  omega_.diagonal().setZero();
}

NonGaussianParams NonGaussianParams::zero(Index n_modes) {
  return NonGaussianParams(RMatrix::Zero(n_modes, n_modes));
}

RotatedCoefficients::RotatedCoefficients(const ManyBodyHamiltonian& h,
                                         const NonGaussianParams& omega)
    : h_(h), omega_(omega.omega()) {
  if (omega.n_modes() != h.n_modes()) {
    throw DimensionError("omega and Hamiltonian have different mode counts");
  }
}

PhaseVector RotatedCoefficients::alpha(Index p, Index q) const {
  return PhaseVector(omega_.col(q) - omega_.col(p));
}

PhaseVector RotatedCoefficients::beta(Index p, Index q, Index r, Index s) const {
  return PhaseVector(omega_.col(s) - omega_.col(p) + omega_.col(r) - omega_.col(q));
}

Complex RotatedCoefficients::f_fa(Index p, Index q) const {
  return h_.f()(p, q) * std::polar(1.0, -omega_(p, q));
}

Complex RotatedCoefficients::h_fa(Index p, Index q, Index r, Index s) const {
  const double phase = omega_(p, q) + omega_(r, s) - omega_(p, r) - omega_(p, s) -
                       omega_(q, r) - omega_(q, s);
  return h_.h(p, q, r, s) * std::polar(1.0, phase);
}

EnergyTerms energy(const CovarianceMatrix& gamma, const NonGaussianParams& omega,
                   const ManyBodyHamiltonian& h, const EvalOptions& options) {
  if (gamma.n_modes() != h.n_modes()) {
    throw DimensionError("covariance and Hamiltonian have different mode counts");
  }
  const RotatedCoefficients rot(h, omega);
  const auto& one = h.one_body_terms();
  const auto& two = h.two_body_terms();
  const std::size_t total = one.size() + two.size();
  struct Sum {
    Complex e1{0.0, 0.0};
    Complex e2{0.0, 0.0};
  };
  const Sum sum = parallel_reduce(
      total, options.threads, Sum{},
      [&](std::size_t begin, std::size_t end) {
        Sum s;
        for (std::size_t k = begin; k < end; ++k) {
          if (k < one.size()) {
            const auto& t = one[k];
            try {
              const WickContext ctx(gamma, rot.alpha(t.p, t.q), options.path);
              s.e1 += rot.f_fa(t.p, t.q) *
                      ctx.expectation(OperatorString({create(t.p), annihilate(t.q)}));
            } catch (const SingularContractionError& e) {
              rethrow_for_term(e, tuple_name({t.p, t.q}));
            }
          } else {
            const auto& t = two[k - one.size()];
            try {
              const WickContext ctx(gamma, rot.beta(t.p, t.q, t.r, t.s), options.path);
              s.e2 += 0.5 * rot.h_fa(t.p, t.q, t.r, t.s) *
                      ctx.expectation(OperatorString({create(t.p), create(t.q),
                                                      annihilate(t.r), annihilate(t.s)}));
            } catch (const SingularContractionError& e) {
              rethrow_for_term(e, tuple_name({t.p, t.q, t.r, t.s}));
            }
          }
        }
        return s;
      },
      [](Sum a, Sum b) {
        a.e1 += b.e1;
        a.e2 += b.e2;
        return a;
      });
  EnergyTerms out;
  out.e1 = sum.e1.real();
  out.e2 = sum.e2.real();
  out.total = out.e1 + out.e2;
  out.imag_residue = std::abs(sum.e1.imag() + sum.e2.imag());
  return out;
}

GradientBrackets energy_gradient_brackets(const CovarianceMatrix& gamma,
                                          const NonGaussianParams& omega,
                                          const ManyBodyHamiltonian& h,
                                          const EvalOptions& options) {
  const Index n = h.n_modes();
  if (gamma.n_modes() != n) {
    throw DimensionError("covariance and Hamiltonian have different mode counts");
  }
  const RotatedCoefficients rot(h, omega);
  const auto& one = h.one_body_terms();
  const auto& two = h.two_body_terms();
  const std::size_t total = one.size() + two.size();
  GradientBrackets zero{CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
  GradientBrackets sums = parallel_reduce(
      total, options.threads, zero,
      [&](std::size_t begin, std::size_t end) {
        GradientBrackets b{CMatrix::Zero(n, n), CMatrix::Zero(n, n),
                           CMatrix::Zero(n, n)};
        for (std::size_t k = begin; k < end; ++k) {
          if (k < one.size()) {
            // f^FA_ip <i^+ j^+ j p>, added to (i, j) and (j, i)
            const auto& t = one[k];
            try {
              const WickContext ctx(gamma, rot.alpha(t.p, t.q), options.path);
              const Complex coeff = rot.f_fa(t.p, t.q);
              for (Index j = 0; j < n; ++j) {
                if (j == t.p) continue;
                const Complex v =
                    coeff * ctx.expectation(OperatorString(
                                {create(t.p), create(j), annihilate(j), annihilate(t.q)}));
                b.one_body(t.p, j) += v;
                b.one_body(j, t.p) += v;
              }
            } catch (const SingularContractionError& e) {
              rethrow_for_term(e, tuple_name({t.p, t.q}));
            }
          } else {
            const auto& t = two[k - one.size()];
            try {
              const WickContext ctx(gamma, rot.beta(t.p, t.q, t.r, t.s), options.path);
              const Complex coeff = rot.h_fa(t.p, t.q, t.r, t.s);
              if (t.r < t.s && t.p != t.q) {
                // 2 h^FA_ijpq <i^+ j^+ p q> with (i, j) = (p, q) of the term
                b.two_body_pair(t.p, t.q) +=
                    2.0 * coeff *
                    ctx.expectation(OperatorString({create(t.p), create(t.q),
                                                    annihilate(t.r), annihilate(t.s)}));
              }
              if (t.r < t.s) {
                // 2 h^FA_ipqr <j^+ i^+ p^+ j q r> with (i, p, q, r) the term
                for (Index j = 0; j < n; ++j) {
                  if (j == t.p) continue;
                  const Complex v =
                      2.0 * coeff *
                      ctx.expectation(OperatorString({create(j), create(t.p), create(t.q),
                                                      annihilate(j), annihilate(t.r),
                                                      annihilate(t.s)}));
                  b.two_body_triple(t.p, j) += v;
                  b.two_body_triple(j, t.p) += v;
                }
              }
            } catch (const SingularContractionError& e) {
              rethrow_for_term(e, tuple_name({t.p, t.q, t.r, t.s}));
            }
          }
        }
        return b;
      },
      [](GradientBrackets a, GradientBrackets b) {
        a.one_body += b.one_body;
        a.two_body_pair += b.two_body_pair;
        a.two_body_triple += b.two_body_triple;
        return a;
      });
  // each group minus its Hermitian conjugate, halved
  for (CMatrix* m : {&sums.one_body, &sums.two_body_pair, &sums.two_body_triple}) {
    *m = (kI * m->imag()).eval();
  }
  return sums;
}

RMatrix energy_gradient_omega(const CovarianceMatrix& gamma,
                              const NonGaussianParams& omega,
                              const ManyBodyHamiltonian& h,
                              const EvalOptions& options) {
  const GradientBrackets b = energy_gradient_brackets(gamma, omega, h, options);
  RMatrix grad = (b.one_body + b.two_body_pair + b.two_body_triple).imag();
  grad = 0.5 * (grad + grad.transpose()).eval();
  grad.diagonal().setZero();
  return grad;
}

}  // namespace ngs
