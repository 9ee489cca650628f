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
#include <functional>
#include <string>
#include <vector>

#include "mtqc/catalog.hpp"
#include "mtqc/control_env.hpp"
#include "mtqc/sac_agent.hpp"

namespace mtqc {

struct TrainConfig {
  EnvConfig env;
  SacConfig sac;
  std::uint64_t total_steps = 50000;
  /// Uniform-random actions before the first update.
  std::uint64_t warmup_steps = 1000;
  std::uint64_t seed = 0;
  /// Periodic checkpoints land in checkpoint_dir/step_<n>.ckpt; 0 disables.
  std::uint64_t checkpoint_every = 0;
  std::string checkpoint_dir;
  /// Catalog hash recorded in every checkpoint.
  std::uint64_t catalog_hash = 0;

  void validate() const;
};

struct EpisodeLog {
  std::uint64_t episode = 0;
  std::string system_id;
  double total_time = 0.0;
  int segments = 0;
  int steps = 0;
  double final_fidelity = 0.0;
  double episode_return = 0.0;
  /// Environment steps taken so far, this episode included.
  std::uint64_t env_steps = 0;
  double alpha = 0.0;
};

nlohmann::json to_json(const EpisodeLog& log);

/// Called after every episode. Returning true stops training early.
using EpisodeCallback = std::function<bool(const EpisodeLog&, const Agent&)>;

struct TrainResult {
  Agent agent;
  std::vector<EpisodeLog> episodes;
  std::uint64_t env_steps = 0;
  bool stopped_early = false;
};

/// Single-learner multi-task SAC loop: one system drawn uniformly per
/// episode, stochastic rollouts into the replay buffer and one update per
/// environment step after warm-up. Deterministic given config.seed.
TrainResult train(const std::vector<CatalogEntry>& systems, const TrainConfig& config,
                  const EpisodeCallback& on_episode = {});

}  // namespace mtqc
