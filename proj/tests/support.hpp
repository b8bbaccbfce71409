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

#include <random>
#include <vector>

#include "ngs/gaussian.hpp"
#include "ngs/hamiltonian.hpp"
#include "ngs/wick.hpp"

namespace ngs::testing {

inline RMatrix random_omega(Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RMatrix w = RMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) w(i, j) = w(j, i) = u(rng);
  return w;
}

inline PhaseVector random_phases(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  RVector a(n);
  for (Index j = 0; j < n; ++j) a(j) = u(rng);
  return PhaseVector(a);
}

inline OperatorString random_string(Index n, std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> mode(0, n - 1);
  std::bernoulli_distribution dag(0.5);
  std::vector<Ladder> f;
  for (std::size_t k = 0; k < length; ++k) f.push_back({mode(rng), dag(rng)});
  return OperatorString(std::move(f));
}

/// Random real skew matrix.
inline RMatrix random_skew(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RMatrix m = RMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      m(i, j) = g(rng);
      m(j, i) = -m(i, j);
    }
  return m;
}

}  // namespace ngs::testing
