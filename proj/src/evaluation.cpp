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

#include "mtqc/evaluation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "mtqc/parallel.hpp"
#include "mtqc/seeding.hpp"

namespace mtqc {

AgentAction AgentPolicy::act(const Observation& obs, std::mt19937_64& rng) const {
  const auto s = agent_.sample(obs, deterministic_, rng);
  AgentAction a;
  std::copy(s.action.begin(), s.action.end(), a.raw.begin());
  return a;
}

void EvalProtocol::validate() const {
  if (experiments < 1 || trials < 1) throw std::invalid_argument("eval: experiments and trials must be >= 1");
  if (!(success_threshold > 0.0 && success_threshold <= 1.0)) {
    throw std::invalid_argument("eval: success threshold must lie in (0, 1]");
  }
  if (workers < 1) throw std::invalid_argument("eval: workers must be >= 1");
}

RolloutResult rollout(ControlEnv& env, const Policy& policy, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Observation obs = env.reset(seed);
  while (!env.done()) obs = env.step(policy.act(obs, rng)).observation;
  RolloutResult r;
  r.fidelity = env.current_fidelity();
  r.total_time = env.total_time();
  r.segments = env.segments();
  r.effective_segments = env.steps_taken();
  r.applied = env.applied_schedule();
  r.effective_time = r.applied.total_time;
  return r;
}

std::vector<EvaluationRecord> evaluate(const std::vector<CatalogEntry>& systems, const EnvConfig& env,
                                       const Policy& policy, const EvalProtocol& protocol) {
  protocol.validate();
  env.validate();
  const auto per_system = static_cast<std::size_t>(protocol.experiments);
  std::vector<EvaluationRecord> records(systems.size() * per_system);
  parallel_for(records.size(), protocol.workers, [&](std::size_t task) {
    const CatalogEntry& entry = systems[task / per_system];
    const int experiment = static_cast<int>(task % per_system);
    ControlEnv instance(entry, env);
    EvaluationRecord best;
    best.fidelity = -1.0;
    for (int trial = 0; trial < protocol.trials; ++trial) {
      const std::uint64_t seed = derive_seed(
          protocol.seed, {hash_string(entry.id), static_cast<std::uint64_t>(experiment),
                          static_cast<std::uint64_t>(trial)});
      RolloutResult r = rollout(instance, policy, seed);
      if (r.fidelity > best.fidelity) {
        best.fidelity = r.fidelity;
        best.chosen_time = r.total_time;
        best.chosen_segments = r.segments;
        best.effective_time = r.effective_time;
        best.effective_segments = r.effective_segments;
        best.schedule = std::move(r.applied);
      }
    }
    best.system_id = entry.id;
    best.experiment = experiment;
    best.success = best.fidelity >= protocol.success_threshold;
    records[task] = std::move(best);
  });
  return records;
}

Stats describe(std::vector<double> values) {
  Stats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  s.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  s.min = values.front();
  s.max = values.back();
  return s;
}

EvalSummary summarize(const std::vector<EvaluationRecord>& records, double success_threshold) {
  EvalSummary out;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<double>> fids;
  std::vector<double> all_f, ct, cn, et, en;
  for (const auto& r : records) {
    auto [it, inserted] = index.try_emplace(r.system_id, out.systems.size());
    if (inserted) {
      out.systems.push_back({r.system_id});
      fids.emplace_back();
    }
    SystemSummary& s = out.systems[it->second];
    const bool ok = r.fidelity >= success_threshold;
    ++s.experiments;
    s.successes += ok;
    fids[it->second].push_back(r.fidelity);
    ++out.records;
    out.successes += ok;
    all_f.push_back(r.fidelity);
    ct.push_back(r.chosen_time);
    cn.push_back(r.chosen_segments);
    et.push_back(r.effective_time);
    en.push_back(r.effective_segments);
  }
  for (std::size_t k = 0; k < out.systems.size(); ++k) {
    SystemSummary& s = out.systems[k];
    s.success_rate = 100.0 * s.successes / s.experiments;
    const Stats f = describe(fids[k]);
    s.mean_fidelity = f.mean;
    s.median_fidelity = f.median;
  }
  if (out.records > 0) out.success_rate = 100.0 * out.successes / out.records;
  out.fidelity = describe(all_f);
  out.chosen_time = describe(ct);
  out.chosen_segments = describe(cn);
  out.effective_time = describe(et);
  out.effective_segments = describe(en);
  return out;
}

nlohmann::json to_json(const Stats& s) {
  return {{"mean", s.mean}, {"median", s.median}, {"min", s.min}, {"max", s.max}};
}

nlohmann::json to_json(const EvalSummary& s) {
  nlohmann::json systems = nlohmann::json::array();
  for (const auto& x : s.systems) {
    systems.push_back({{"system_id", x.system_id},
                       {"experiments", x.experiments},
                       {"successes", x.successes},
                       {"success_rate", x.success_rate},
                       {"mean_fidelity", x.mean_fidelity},
                       {"median_fidelity", x.median_fidelity}});
  }
  return {{"records", s.records},
          {"successes", s.successes},
          {"success_rate", s.success_rate},
          {"fidelity", to_json(s.fidelity)},
          {"chosen_T", to_json(s.chosen_time)},
          {"chosen_N", to_json(s.chosen_segments)},
          {"effective_T", to_json(s.effective_time)},
          {"effective_N", to_json(s.effective_segments)},
          {"systems", systems}};
}

}  // namespace mtqc
