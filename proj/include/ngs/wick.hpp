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

#include <optional>
#include <utility>
#include <vector>

#include "ngs/gaussian.hpp"
#include "ngs/linalg.hpp"
#include "ngs/types.hpp"

namespace ngs {

/// Per-mode phases alpha(j), wrapped into (-pi, pi] on construction.
class PhaseVector {
 public:
  explicit PhaseVector(RVector alpha);
  static PhaseVector zero(Index n_modes);

  Index size() const { return alpha_.size(); }
  const RVector& values() const { return alpha_; }
  double operator()(Index j) const { return alpha_(j); }
  bool is_zero() const;

 private:
  RVector alpha_;
};

/// A single ladder operator: c_mode^+ when dagger, c_mode otherwise.
struct Ladder {
  Index mode;
  bool dagger;
};

inline Ladder create(Index mode) { return {mode, true}; }
inline Ladder annihilate(Index mode) { return {mode, false}; }

/// Ordered product of ladder operators; length must be even.
class OperatorString {
 public:
  OperatorString() = default;
  explicit OperatorString(std::vector<Ladder> factors);

  const std::vector<Ladder>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  bool empty() const { return factors_.empty(); }

  /// Reversed order with every dagger flipped.
  OperatorString adjoint() const;

 private:
  std::vector<Ladder> factors_;
};

enum class PairKind { DagPlain, DagDag, PlainPlain };

/// Perfect matching of {0, ..., 2p-1}; pairs sorted by first element.
struct Pairing {
  std::vector<std::pair<int, int>> pairs;
  int sign;
};

inline constexpr std::size_t kMaxStringLength = 12;

/// All (2p-1)!! pairings of a string of the given length, cached.
/// Throws ParityError for odd lengths and DimensionError above
/// kMaxStringLength.
const std::vector<Pairing>& enumerate_pairings(std::size_t length);

enum class InversePath { Auto, Direct, Miller };

/// Generalized Wick evaluation for one (Gamma, alpha) pair.
///
/// Holds A, G, L and Q, computed on first use. A context is not
/// synchronized; evaluate concurrently by giving each thread its own.
class WickContext {
 public:
  WickContext(const CovarianceMatrix& gamma, const PhaseVector& alpha,
              InversePath path = InversePath::Auto);

  Index n_modes() const { return n_; }
  const PhaseVector& alpha() const { return alpha_; }

  /// sqrt(1 - e^{i alpha}) Gamma sqrt(1 - e^{i alpha}) - sigma (x) diag(1 + e^{i alpha})
  const CMatrix& gamma_f() const { return gamma_f_; }

  /// <e^{i sum alpha n}> = s_N (1/2)^N Pf(Gamma_F)
  Complex a_coeff() const { return a_; }

  /// (Gamma + Upsilon) [1 + (1/2)(1 - e^{i alpha})(Upsilon Gamma - 1)]^{-1}
  const CMatrix& g() const;

  /// 1 - (1/2) G K Upsilon with K = diag(1 - e^{i alpha}); dG = L dGamma L^T.
  const CMatrix& l() const;

  /// dA/dGamma = Q A (structured derivative).
  const CMatrix& q() const;

  /// Whether g() / q() came from rank-1 assembly.
  bool g_used_miller() const;
  bool q_used_miller() const;

  /// Contraction of ladders a, b (a left of b) divided by A.
  Complex contraction(Ladder a, Ladder b) const;

  Complex pair_expectation(PairKind kind, Index p, Index q) const;

  Complex expectation(const OperatorString& s) const;

  struct ValueAndDerivative {
    Complex value;
    CMatrix d_gamma;  // structured derivative, skew
  };

  /// Expectation together with its derivative with respect to Gamma, where
  /// the derivative X satisfies d<...> = sum_ij X_ij dGamma_ij for skew
  /// perturbations, i.e. the directional derivative along e_ij - e_ji is
  /// 2 X_ij.
  ValueAndDerivative expectation_with_derivative(const OperatorString& s) const;

 private:
  struct ContractionForm {
    Complex offset;
    Complex scale;
    BlockContractionKind kind;
    Index p;
    Index q;
  };

  ContractionForm contraction_form(Ladder a, Ladder b) const;
  void check_modes(const OperatorString& s) const;
  std::string describe_alpha() const;
  void compute_g() const;
  void compute_q() const;

  Index n_;
  RMatrix gamma_;
  PhaseVector alpha_;
  InversePath path_;
  CVector phase_;  // e^{i alpha}, length N
  CVector k_;      // 1 - e^{i alpha}, length 2N
  CVector dsqrt_;  // principal sqrt(k), length 2N
  CMatrix gamma_f_;
  Complex a_;

  mutable std::optional<CMatrix> g_;
  mutable std::optional<CMatrix> l_;
  mutable std::optional<CMatrix> q_;
  mutable bool g_miller_ = false;
  mutable bool q_miller_ = false;
};

/// Sign s_N = (-1)^{N/2} for even N and (-1)^{(N+1)/2} for odd N.
int overlap_sign(Index n_modes);

SkewMatrix gamma_F(const CovarianceMatrix& gamma, const PhaseVector& alpha);
Complex a_coeff(const CovarianceMatrix& gamma, const PhaseVector& alpha);
SkewMatrix g_matrix(const CovarianceMatrix& gamma, const PhaseVector& alpha,
                    InversePath path = InversePath::Auto);
CMatrix q_matrix(const CovarianceMatrix& gamma, const PhaseVector& alpha,
                 InversePath path = InversePath::Auto);
Complex pair_expectation(const CovarianceMatrix& gamma, const PhaseVector& alpha,
                         PairKind kind, Index p, Index q);
Complex expectation(const CovarianceMatrix& gamma, const PhaseVector& alpha,
                    const OperatorString& s);

/// Classical Wick sum of a string over a Gaussian state, built directly from
/// G = Gamma + Upsilon without any phase machinery.
Complex plain_wick_expectation(const CovarianceMatrix& gamma,
                               const OperatorString& s);

}  // namespace ngs
