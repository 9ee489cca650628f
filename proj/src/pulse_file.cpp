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

#include "mtqc/pulse_file.hpp"

#include <fstream>
#include <stdexcept>

namespace mtqc {

nlohmann::json to_json(const PulseFileEntry& p) {
  nlohmann::json amps = nlohmann::json::array();
  for (int k = 0; k < p.schedule.segments(); ++k) {
    const auto seg = p.schedule.segment(k);
    amps.push_back(std::vector<double>(seg.begin(), seg.end()));
  }
  return {{"system_id", p.system_id},
          {"experiment", p.experiment},
          {"T", p.schedule.total_time},
          {"N", p.schedule.segments()},
          {"amplitudes", amps},
          {"mode", to_string(p.mode)},
          {"gamma", p.gamma},
          {"seed", p.seed},
          {"nominal_fidelity", p.nominal_fidelity}};
}

PulseFileEntry pulse_from_json(const nlohmann::json& j) {
  try {
    PulseFileEntry p;
    p.system_id = j.at("system_id").get<std::string>();
    p.experiment = j.value("experiment", 0);
    p.schedule.total_time = j.at("T").get<double>();
    const int n = j.at("N").get<int>();
    const auto rows = j.at("amplitudes").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != n || n < 1) {
      throw std::invalid_argument("pulse " + p.system_id + ": N does not match the amplitude rows");
    }
    const auto m = static_cast<Eigen::Index>(rows.front().size());
    p.schedule.amplitudes.resize(n, m);
    for (int k = 0; k < n; ++k) {
      if (static_cast<Eigen::Index>(rows[k].size()) != m) {
        throw std::invalid_argument("pulse " + p.system_id + ": ragged amplitude rows");
      }
      for (Eigen::Index c = 0; c < m; ++c) p.schedule.amplitudes(k, c) = rows[k][c];
    }
    p.mode = parse_dynamics_mode(j.at("mode").get<std::string>());
    p.gamma = j.at("gamma").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.nominal_fidelity = j.at("nominal_fidelity").get<double>();
    if (!(p.schedule.total_time > 0.0)) throw std::invalid_argument("pulse " + p.system_id + ": T must be positive");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed pulse entry: ") + e.what());
  }
}

nlohmann::json to_json(const PulseSet& set) {
  nlohmann::json pulses = nlohmann::json::array();
  for (const auto& p : set.pulses) pulses.push_back(to_json(p));
  return {{"format", "mtqc-pulses"},
          {"version", 1},
          {"source", set.source},
          {"config_hash", set.config_hash},
          {"pulses", pulses}};
}

PulseSet pulse_set_from_json(const nlohmann::json& j) {
  PulseSet set;
  if (!j.is_object()) throw std::invalid_argument("pulse file: expected a JSON object");
  if (!j.contains("pulses")) {
    set.pulses.push_back(pulse_from_json(j));
    return set;
  }
  if (j.value("format", "") != "mtqc-pulses" || j.value("version", 0) != 1) {
    throw std::invalid_argument("pulse file: unsupported format or version");
  }
  set.source = j.value("source", "");
  set.config_hash = j.value("config_hash", "");
  for (const auto& p : j.at("pulses")) set.pulses.push_back(pulse_from_json(p));
  return set;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed for " + path);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace mtqc
