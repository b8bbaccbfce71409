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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ngs/hamiltonian.hpp"

namespace ngs::cli {

struct CheckResult {
  std::string name;
  double deviation;
  double tolerance;
  bool passed() const { return deviation <= tolerance; }
};

struct ValidateOptions {
  Index n_modes = 4;
  int draws = 5;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Cross-checks the library against the Fock-space oracle. With `h` unset a
/// random Hamiltonian is drawn for every instance.
std::vector<CheckResult> run_validation(const ValidateOptions& options,
                                        const std::optional<ManyBodyHamiltonian>& h);

}  // namespace ngs::cli
