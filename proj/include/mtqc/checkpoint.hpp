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
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mtqc/sac_agent.hpp"

namespace mtqc {

inline constexpr std::uint32_t kCheckpointVersion = 1;

enum class CheckpointErrorKind { kIo, kVersion, kCorrupt };

class CheckpointError : public std::runtime_error {
 public:
  CheckpointError(CheckpointErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  CheckpointErrorKind kind() const { return kind_; }

 private:
  CheckpointErrorKind kind_;
};

struct LoadedCheckpoint {
  Agent agent;
  std::uint64_t catalog_hash = 0;
};

// Layout (little-endian):
//   "MTQCCKPT" | u32 version | u64 catalog hash | u32 obs | u32 act
//   | u32 n_hidden | u32 hidden[n_hidden] | u32 config_len | config json
//   | f64 log_alpha | u64 updates
//   | 5 x (u64 count | f64 params[count])   policy, q1, q2, q1', q2'
//   | u32 crc32 of everything before it
std::vector<std::uint8_t> serialize_checkpoint(const Agent& agent, std::uint64_t catalog_hash);
LoadedCheckpoint parse_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const Agent& agent, std::uint64_t catalog_hash, const std::string& path);
LoadedCheckpoint load_checkpoint(const std::string& path);

nlohmann::json sac_config_to_json(const SacConfig& config);
SacConfig sac_config_from_json(const nlohmann::json& j);

}  // namespace mtqc
