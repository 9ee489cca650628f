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

#include "mtqc/trainer.hpp"

#include <filesystem>
#include <random>
#include <stdexcept>

#include "mtqc/checkpoint.hpp"
#include "mtqc/replay_buffer.hpp"
#include "mtqc/seeding.hpp"

namespace mtqc {

void TrainConfig::validate() const {
  env.validate();
  sac.validate();
  if (total_steps == 0) throw std::invalid_argument("train: total_steps must be positive");
  if (checkpoint_every > 0 && checkpoint_dir.empty()) {
    throw std::invalid_argument("train: checkpoint_every needs a checkpoint_dir");
  }
}

nlohmann::json to_json(const EpisodeLog& log) {
  return {{"episode", log.episode},         {"system_id", log.system_id},
          {"T", log.total_time},            {"N", log.segments},
          {"steps", log.steps},             {"fidelity", log.final_fidelity},
          {"return", log.episode_return},   {"env_steps", log.env_steps},
          {"alpha", log.alpha}};
}

TrainResult train(const std::vector<CatalogEntry>& systems, const TrainConfig& config,
                  const EpisodeCallback& on_episode) {
  if (systems.empty()) throw std::invalid_argument("train: empty system subset");
  config.validate();

  std::vector<ControlEnv> envs;
  envs.reserve(systems.size());
  for (const auto& e : systems) envs.emplace_back(e, config.env);

  TrainResult result{Agent(config.sac, derive_seed(config.seed, {1})), {}, 0, false};
  Agent& agent = result.agent;
  ReplayBuffer buffer(config.sac.buffer_capacity, config.sac.obs_dim, config.sac.act_dim);
  std::mt19937_64 task_rng(derive_seed(config.seed, {2}));
  std::mt19937_64 act_rng(derive_seed(config.seed, {3}));
  std::mt19937_64 update_rng(derive_seed(config.seed, {4}));
  std::uniform_int_distribution<std::size_t> pick(0, systems.size() - 1);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  const auto batch = static_cast<std::size_t>(config.sac.batch_size);

  if (config.checkpoint_every > 0) std::filesystem::create_directories(config.checkpoint_dir);

  std::uint64_t steps = 0;
  std::uint64_t episode = 0;
  while (steps < config.total_steps) {
    ControlEnv& env = envs[pick(task_rng)];
    Observation obs = env.reset(derive_seed(config.seed, {5, episode}));
    double ret = 0.0;
    while (!env.done() && steps < config.total_steps) {
      AgentAction action;
      if (steps < config.warmup_steps) {
        for (auto& v : action.raw) v = uniform(act_rng);
      } else {
        const auto s = agent.sample(obs, false, act_rng);
        std::copy(s.action.begin(), s.action.end(), action.raw.begin());
      }
      const StepOutcome out = env.step(action);
      buffer.add(obs, action.raw, out.reward, out.observation, out.done);
      obs = out.observation;
      ret += out.reward;
      ++steps;
      if (steps >= config.warmup_steps && buffer.size() >= batch) {
        agent.update(buffer.sample<float>(batch, update_rng), update_rng);
      }
      if (config.checkpoint_every > 0 && steps % config.checkpoint_every == 0) {
        const auto path = std::filesystem::path(config.checkpoint_dir) / ("step_" + std::to_string(steps) + ".ckpt");
        save_checkpoint(agent, config.catalog_hash, path.string());
      }
    }
    EpisodeLog log;
    log.episode = episode++;
    log.system_id = env.entry().id;
    log.total_time = env.total_time();
    log.segments = env.segments();
    log.steps = env.steps_taken();
    log.final_fidelity = env.current_fidelity();
    log.episode_return = ret;
    log.env_steps = steps;
    log.alpha = agent.alpha();
    result.episodes.push_back(log);
    if (on_episode && on_episode(log, agent)) {
      result.stopped_early = true;
      break;
    }
  }
  result.env_steps = steps;
  return result;
}

}  // namespace mtqc
