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

#include <cstddef>
#include <span>

#include "ngs/types.hpp"

namespace ngs {

/// Absolute tolerance used to accept a matrix as skew-symmetric / Hermitian.
inline constexpr double kStructureTolerance = 1e-10;

/// Even-dimensional complex skew-symmetric matrix.
///
/// Construction validates skewness to kStructureTolerance and then replaces
/// the entries by (S - S^T)/2 so downstream algorithms see exact structure.
class SkewMatrix {
 public:
  explicit SkewMatrix(CMatrix entries);
  static SkewMatrix from_real(const RMatrix& entries);

  Index dim() const { return entries_.rows(); }
  const CMatrix& entries() const { return entries_; }

 private:
  CMatrix entries_;
};

/// Pfaffian of a skew-symmetric matrix (Parlett-Reid tridiagonalization
/// with partial pivoting).
Complex pfaffian(const SkewMatrix& s);

/// Validating overload; throws DimensionError / ValidationError.
Complex pfaffian(const CMatrix& s);

/// Orthogonal matrix exp(i*xi) for a Hermitian, antisymmetric xi.
RMatrix skew_exp(const CMatrix& xi);

enum class BlockContractionKind { PlusMinus, MinusPlus, PlusPlus, MinusMinus };

/// The row/column vectors u, v with block_contract(M, kind, p, q) = u^T M v.
/// The row vector is built from q and the column vector from p.
struct ContractionVectors {
  CVector left;
  CVector right;
};

ContractionVectors contraction_vectors(Index n_modes, BlockContractionKind kind,
                                       Index p, Index q);

/// Four-term signed sum of M[q,p], M[q,N+p], M[N+q,p], M[N+q,N+p] (0-based
/// modes) with the i-weights of the chosen kind.
Complex block_contract(const CMatrix& m, BlockContractionKind kind, Index p,
                       Index q);

/// beta * |row><col|
struct RankOneUpdate {
  Complex beta;
  Index row;
  Index col;
};

class SingularUpdateError : public Error {
 public:
  SingularUpdateError(std::size_t step, const std::string& what)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

inline constexpr double kMillerDenominatorFloor = 1e-12;

/// Iterated Sherman-Morrison: given C_1^{-1} returns (C_1 + sum_k B_k)^{-1}.
/// Throws SingularUpdateError naming the 1-based step whose denominator
/// 1 + tr(C_l^{-1} B_l) falls below kMillerDenominatorFloor.
///
/// The base inverse itself may be singular; the recursion only ever touches
/// C_l^{-1}, so it stays well defined as long as the denominators do.
CMatrix miller_inverse_strict(const CMatrix& base_inverse,
                              std::span<const RankOneUpdate> updates);

struct MillerResult {
  CMatrix inverse;
  bool fell_back = false;
  std::size_t failed_step = 0;  // 1-based, valid when fell_back
};

/// As miller_inverse_strict, but on a singular update falls back to direct
/// inversion of (base + sum_k B_k) and reports it through the flag.
MillerResult miller_inverse(const CMatrix& base_inverse,
                            std::span<const RankOneUpdate> updates);

/// Moore-Penrose inverse via SVD; singular values below rcond * sigma_max are
/// treated as zero.
RMatrix pseudo_inverse(const RMatrix& m, double rcond = 1e-12);
CMatrix pseudo_inverse(const CMatrix& m, double rcond = 1e-12);

/// Frobenius-norm deviation from skewness, ||M + M^T||_F.
double skew_deviation(const RMatrix& m);
double skew_deviation(const CMatrix& m);

}  // namespace ngs
