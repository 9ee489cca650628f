// Copyright 2026 The mtqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mtqc/control_env.hpp"
#include "mtqc/evaluation.hpp"
#include "mtqc/grape.hpp"
#include "mtqc/robustness.hpp"
#include "mtqc/sac_agent.hpp"
#include "mtqc/trainer.hpp"

namespace mtqc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string name = "run";
  std::string runs_dir = "runs";
  /// Catalog selector: ids, "all", "table1", "single", "two", "three".
  std::string systems = "table1";
  DynamicsMode mode = DynamicsMode::kOpen;
  double gamma = 0.01;
  std::uint64_t seed = 0;
  int workers = 1;

  struct Env {
    /// Defaults to 0.999 closed, 0.95 open.
    std::optional<double> f_min;
    double t_min = 1.0;
    double t_max = 20.0;
    int n_min = 2;
    int n_max = 60;
    double u_max = 1.0;
    std::optional<double> fixed_time;
    std::optional<int> fixed_segments;
  } env;

  struct Train {
    std::uint64_t total_steps = 50000;
    std::uint64_t warmup_steps = 1000;
    std::uint64_t checkpoint_every = 0;
  } train;

  SacConfig sac;
  EvalProtocol eval;

  struct Grape {
    GrapeConfig optimizer;
    /// When unset, T and N come from a pulse file.
    std::optional<double> total_time;
    std::optional<int> segments;
  } grape;

  struct Rim {
    double delta_u = 0.05;
    double delta_gamma = 0.005;
    double nominal_gamma = 0.01;
    int samples = 15;
    bool per_segment = false;
    std::vector<PerturbationKind> kinds = {PerturbationKind::kPulse, PerturbationKind::kDecoherence,
                                           PerturbationKind::kCombined};
    double nominal_threshold = 0.95;
  } rim;

  struct Expand {
    std::vector<int> stages = {5, 10, 20, 30, 40, 51};
    /// A held-out system counts as solved at this per-system success rate.
    double solved_fraction = 0.5;
  } expand;

  struct Gap {
    std::vector<double> gammas = {0.01, 0.02};
  } gap;

  EnvConfig env_config() const;
  TrainConfig train_config(std::uint64_t catalog_hash) const;
  std::vector<PerturbationModel> perturbation_models() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Strict: unknown keys and wrong types raise ConfigError naming the key.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);
RunConfig load_run_config(const std::string& path);
/// FNV-1a over the canonical JSON form, as 16 hex digits.
std::string config_hash(const RunConfig& c);

}  // namespace mtqc
