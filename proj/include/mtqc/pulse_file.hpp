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
#include <string>
#include <vector>

#include "json.hpp"
#include "mtqc/dynamics.hpp"
#include "mtqc/robustness.hpp"

namespace mtqc {

/// {system_id, T, N, amplitudes: [[...] per segment], mode, gamma, seed,
/// nominal_fidelity}, plus an optional experiment index.
struct PulseFileEntry {
  std::string system_id;
  int experiment = 0;
  PulseSchedule schedule;
  DynamicsMode mode = DynamicsMode::kOpen;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  double nominal_fidelity = 0.0;

  PulseRecord record() const { return {system_id, experiment, schedule}; }
};

nlohmann::json to_json(const PulseFileEntry& p);
/// Throws std::invalid_argument on malformed input.
PulseFileEntry pulse_from_json(const nlohmann::json& j);

struct PulseSet {
  std::string source;  // "sac", "grape" or free text
  std::string config_hash;
  std::vector<PulseFileEntry> pulses;
};

nlohmann::json to_json(const PulseSet& set);
/// Accepts a pulse-set document or a single pulse object.
PulseSet pulse_set_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace mtqc
