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

#include <filesystem>
#include <string>

#include "ngs/optimizer.hpp"

namespace ngs {

// Checkpoint: {"n_modes", "gamma" (row-major), "omega" (row-major), "tau",
// "energy"}. Doubles are written in shortest round-trip form.

std::string checkpoint_json(const OptimizerState& state);

/// Parses a checkpoint; requires ||Gamma^2 + 1||_F <= 1e-8.
OptimizerState parse_checkpoint(const std::string& text);

void save_checkpoint(const OptimizerState& state, const std::filesystem::path& path);
OptimizerState load_checkpoint(const std::filesystem::path& path);

/// One JSON-lines record without the trailing newline.
std::string trajectory_json(const TrajectoryRecord& record);

}  // namespace ngs
