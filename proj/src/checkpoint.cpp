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

#include "ngs/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ngs {

namespace {

using Json = nlohmann::ordered_json;

Json matrix_json(const RMatrix& m) {
  Json a = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  return a;
}

RMatrix matrix_from_json(const Json& a, Index dim, const char* name) {
  if (!a.is_array() || a.size() != static_cast<std::size_t>(dim * dim)) {
    std::ostringstream msg;
    msg << "checkpoint field '" << name << "' must hold " << dim * dim << " numbers";
    throw ParseError(msg.str());
  }
  RMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) {
      const Json& v = a[static_cast<std::size_t>(i * dim + j)];
      if (!v.is_number()) throw ParseError(std::string("non-numeric entry in '") + name + "'");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

std::string checkpoint_json(const OptimizerState& state) {
  Json j;
  j["n_modes"] = state.gamma.n_modes();
  j["gamma"] = matrix_json(state.gamma.gamma());
  j["omega"] = matrix_json(state.omega.omega());
  j["tau"] = state.tau;
  j["energy"] = state.energy;
  return j.dump(1);
}

OptimizerState parse_checkpoint(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("checkpoint must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "n_modes" && key != "gamma" && key != "omega" && key != "tau" &&
        key != "energy") {
      throw ParseError("unknown checkpoint field '" + key + "'");
    }
  }
  for (const char* key : {"n_modes", "gamma", "omega", "tau", "energy"}) {
    if (!j.contains(key)) throw ParseError(std::string("checkpoint lacks '") + key + "'");
  }
  if (!j["n_modes"].is_number_integer() || j["n_modes"].get<long>() < 1) {
    throw ParseError("checkpoint n_modes must be a positive integer");
  }
  if (!j["tau"].is_number() || !j["energy"].is_number()) {
    throw ParseError("checkpoint tau and energy must be numbers");
  }
  const auto n = static_cast<Index>(j["n_modes"].get<long>());
  CovarianceMatrix gamma(matrix_from_json(j["gamma"], 2 * n, "gamma"));
  if (gamma.purity_error() > 1e-8) {
    std::ostringstream msg;
    msg << "checkpoint covariance is not pure (||G^2 + 1|| = " << gamma.purity_error() << ")";
    throw ValidationError(msg.str());
  }
  NonGaussianParams omega(matrix_from_json(j["omega"], n, "omega"));
  return OptimizerState{std::move(gamma), std::move(omega), j["tau"].get<double>(),
                        j["energy"].get<double>(), 0.1};
}

void save_checkpoint(const OptimizerState& state, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << checkpoint_json(state) << "\n";
  if (!out) throw Error("failed writing " + path.string());
}

OptimizerState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

std::string trajectory_json(const TrajectoryRecord& r) {
  Json j;
  j["step"] = r.step;
  j["tau"] = r.tau;
  j["energy"] = r.energy;
  j["grad_norm"] = r.grad_norm;
  j["dtau"] = r.dtau;
  j["purity_err"] = r.purity_err;
  j["wall_ms"] = r.wall_ms;
  return j.dump();
}

}  // namespace ngs
