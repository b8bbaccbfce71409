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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ngs {

using Complex = std::complex<double>;
using Index = Eigen::Index;

using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or index mismatch (odd dimension, index out of range, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a structural invariant (skewness, hermiticity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operator string has odd length.
class ParityError : public Error {
 public:
  using Error::Error;
};

/// A contraction matrix could not be formed (near-singular denominator or
/// vanishing overlap coefficient).
class SingularContractionError : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix too close to a degenerate (mixed) spectrum to purify.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for a dense Fock-space construction.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Backtracking shrank the step below the configured minimum.
class StagnationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Wrap an angle into (-pi, pi].
double wrap_phase(double angle);

}  // namespace ngs
