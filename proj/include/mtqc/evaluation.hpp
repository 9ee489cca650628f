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
#include <random>
#include <string>
#include <vector>

#include "mtqc/catalog.hpp"
#include "mtqc/control_env.hpp"
#include "mtqc/sac_agent.hpp"

namespace mtqc {

/// Anything that maps observations to actions. Implementations must be
/// safe to call concurrently from several threads.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual AgentAction act(const Observation& obs, std::mt19937_64& rng) const = 0;
};

class AgentPolicy final : public Policy {
 public:
  AgentPolicy(const Agent& agent, bool deterministic) : agent_(agent), deterministic_(deterministic) {}
  AgentAction act(const Observation& obs, std::mt19937_64& rng) const override;

 private:
  const Agent& agent_;
  bool deterministic_;
};

struct EvalProtocol {
  int experiments = 30;
  int trials = 25;
  double success_threshold = 0.95;
  std::uint64_t seed = 0;
  bool deterministic = false;
  /// Worker threads; results do not depend on this.
  int workers = 1;

  void validate() const;
};

struct RolloutResult {
  double fidelity = 0.0;
  double total_time = 0.0;
  int segments = 0;
  double effective_time = 0.0;
  int effective_segments = 0;
  PulseSchedule applied;
};

RolloutResult rollout(ControlEnv& env, const Policy& policy, std::uint64_t seed);

struct EvaluationRecord {
  std::string system_id;
  int experiment = 0;
  double fidelity = 0.0;
  double chosen_time = 0.0;
  int chosen_segments = 0;
  double effective_time = 0.0;
  int effective_segments = 0;
  bool success = false;
  /// Pulses of the best trial, as executed.
  PulseSchedule schedule;
};

/// experiments x trials rollouts per system; each record keeps the best
/// trial of its experiment.
std::vector<EvaluationRecord> evaluate(const std::vector<CatalogEntry>& systems, const EnvConfig& env,
                                       const Policy& policy, const EvalProtocol& protocol);

struct Stats {
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

Stats describe(std::vector<double> values);

struct SystemSummary {
  std::string system_id;
  int experiments = 0;
  int successes = 0;
  double success_rate = 0.0;  // percent
  double mean_fidelity = 0.0;
  double median_fidelity = 0.0;
};

struct EvalSummary {
  std::vector<SystemSummary> systems;
  int records = 0;
  int successes = 0;
  double success_rate = 0.0;  // percent
  Stats fidelity;
  Stats chosen_time;
  Stats chosen_segments;
  Stats effective_time;
  Stats effective_segments;
};

/// Systems appear in order of first occurrence in `records`.
EvalSummary summarize(const std::vector<EvaluationRecord>& records, double success_threshold);

nlohmann::json to_json(const Stats& s);
nlohmann::json to_json(const EvalSummary& s);

}  // namespace mtqc
