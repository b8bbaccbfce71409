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

#include "run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ngs/checkpoint.hpp"

namespace ngs::cli {

namespace {

using Json = nlohmann::json;

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double get_number(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

long get_integer(const Json& obj, const char* key, long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw ConfigError(std::string("'") + key + "' must be an integer");
  }
  return obj[key].get<long>();
}

std::string get_string(const Json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return obj[key].get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

OmegaUpdate parse_omega_update(const std::string& name) {
  if (name == "hitgd") return OmegaUpdate::Hitgd;
  if (name == "simple") return OmegaUpdate::Simple;
  if (name == "frozen") return OmegaUpdate::Frozen;
  throw ConfigError("omega_update must be hitgd, simple or frozen, got '" + name + "'");
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  reject_unknown(j,
                 {"hamiltonian", "init", "omega_update", "simple_c", "dtau_initial", "dtau_min",
                  "dtau_max", "dtau_growth", "tol_grad", "tol_energy", "patience", "max_steps",
                  "threads", "checkpoint", "trajectory"},
                 "config");

  RunConfig c;
  require(j.contains("hamiltonian"), "config lacks 'hamiltonian'");
  const Json& h = j["hamiltonian"];
  if (h.is_string()) {
    c.hamiltonian_file = resolve(base_dir, h.get<std::string>());
  } else if (h.is_object()) {
    reject_unknown(h, {"model", "sites", "t", "u", "mu", "periodic"}, "hamiltonian");
    require(get_string(h, "model", "") == "hubbard", "hamiltonian.model must be \"hubbard\"");
    c.hubbard.sites = get_integer(h, "sites", c.hubbard.sites);
    c.hubbard.t = get_number(h, "t", c.hubbard.t);
    c.hubbard.u = get_number(h, "u", c.hubbard.u);
    c.hubbard.mu = get_number(h, "mu", c.hubbard.mu);
    if (h.contains("periodic")) {
      require(h["periodic"].is_boolean(), "'periodic' must be a boolean");
      c.hubbard.periodic = h["periodic"].get<bool>();
    }
  } else {
    throw ConfigError("'hamiltonian' must be a path or a model object");
  }

  if (j.contains("init")) {
    const Json& in = j["init"];
    require(in.is_object(), "'init' must be an object");
    reject_unknown(in, {"type", "filling", "perturbation", "scale", "seed", "path"}, "init");
    const std::string type = get_string(in, "type", "mean-field");
    if (type == "mean-field") {
      c.init.kind = InitKind::MeanField;
    } else if (type == "random") {
      c.init.kind = InitKind::Random;
    } else if (type == "checkpoint") {
      c.init.kind = InitKind::Checkpoint;
      require(in.contains("path"), "checkpoint init needs 'path'");
      c.init.checkpoint = resolve(base_dir, get_string(in, "path", ""));
    } else {
      throw ConfigError("init.type must be mean-field, random or checkpoint");
    }
    if (in.contains("filling")) c.init.filling = get_integer(in, "filling", 0);
    c.init.perturbation = get_number(in, "perturbation", c.init.perturbation);
    c.init.scale = get_number(in, "scale", c.init.scale);
    const long seed = get_integer(in, "seed", 0);
    require(seed >= 0, "init.seed must be non-negative");
    c.init.seed = static_cast<std::uint64_t>(seed);
  }

  OptimizerConfig& o = c.optimizer;
  o.update = parse_omega_update(get_string(j, "omega_update", "hitgd"));
  if (o.update == OmegaUpdate::Simple) {
    require(j.contains("simple_c"), "omega_update \"simple\" needs 'simple_c'");
  }
  o.simple_c = get_number(j, "simple_c", o.simple_c);
  o.dtau_initial = get_number(j, "dtau_initial", o.dtau_initial);
  o.dtau_min = get_number(j, "dtau_min", o.dtau_min);
  o.dtau_max = get_number(j, "dtau_max", o.dtau_max);
  o.dtau_growth = get_number(j, "dtau_growth", o.dtau_growth);
  o.tol_grad = get_number(j, "tol_grad", o.tol_grad);
  o.tol_energy = get_number(j, "tol_energy", o.tol_energy);
  o.patience = static_cast<int>(get_integer(j, "patience", o.patience));
  o.max_steps = static_cast<int>(get_integer(j, "max_steps", o.max_steps));
  o.eval.threads = static_cast<int>(get_integer(j, "threads", o.eval.threads));
  if (j.contains("checkpoint")) c.checkpoint_out = resolve(base_dir, get_string(j, "checkpoint", ""));
  else c.checkpoint_out = base_dir / c.checkpoint_out;
  if (j.contains("trajectory")) c.trajectory_out = resolve(base_dir, get_string(j, "trajectory", ""));
  else c.trajectory_out = base_dir / c.trajectory_out;
  validate_run_config(c);
  return c;
}

void validate_run_config(const RunConfig& c) {
  const OptimizerConfig& o = c.optimizer;
  require(c.hamiltonian_file || c.hubbard.sites >= 2, "hubbard sites must be at least 2");
  require(o.simple_c > 0.0, "simple_c must be positive");
  require(o.dtau_min > 0.0, "dtau_min must be positive");
  require(o.dtau_initial >= o.dtau_min, "dtau_initial must be at least dtau_min");
  require(o.dtau_max >= o.dtau_initial, "dtau_max must be at least dtau_initial");
  require(o.dtau_growth >= 1.0, "dtau_growth must be at least 1");
  require(o.tol_grad > 0.0, "tol_grad must be positive");
  require(o.tol_energy > 0.0, "tol_energy must be positive");
  require(o.patience >= 1, "patience must be at least 1");
  require(o.max_steps >= 0, "max_steps must be non-negative");
  require(o.eval.threads >= 1, "threads must be at least 1");
  require(c.init.perturbation >= 0.0, "init.perturbation must be non-negative");
  require(c.init.scale >= 0.0, "init.scale must be non-negative");
  require(!c.init.filling || *c.init.filling >= 0, "init.filling must be non-negative");
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path());
}

ManyBodyHamiltonian build_hamiltonian(const RunConfig& c) {
  if (c.hamiltonian_file) return load_hamiltonian(*c.hamiltonian_file);
  return hubbard_model(c.hubbard.sites, c.hubbard.t, c.hubbard.u, c.hubbard.mu,
                       c.hubbard.periodic);
}

OptimizerState build_initial_state(const RunConfig& c, const ManyBodyHamiltonian& h) {
  const Index n = h.n_modes();
  std::mt19937_64 rng(c.init.seed);
  switch (c.init.kind) {
    case InitKind::Checkpoint: {
      OptimizerState s = load_checkpoint(c.init.checkpoint);
      if (s.gamma.n_modes() != n) {
        throw ConfigError("checkpoint mode count does not match the Hamiltonian");
      }
      // energy is re-evaluated so that a changed Hamiltonian cannot be mistaken
      // for a converged one
      OptimizerState fresh = make_state(s.gamma, s.omega, h, c.optimizer);
      fresh.tau = s.tau;
      return fresh;
    }
    case InitKind::Random:
      return make_state(covariance_from_xi(random_gaussian_params(n, rng, c.init.scale)),
                        NonGaussianParams::zero(n), h, c.optimizer);
    case InitKind::MeanField:
      break;
  }
  const Index filling = c.init.filling.value_or(n / 2);
  if (filling > n) throw ConfigError("init.filling exceeds the number of modes");
  CovarianceMatrix gamma = mean_field_covariance(h.f(), filling);
  if (c.init.perturbation > 0.0) {
    gamma = rotate_covariance(gamma, random_gaussian_params(n, rng, c.init.perturbation));
  }
  return make_state(gamma, NonGaussianParams::zero(n), h, c.optimizer);
}

}  // namespace ngs::cli
