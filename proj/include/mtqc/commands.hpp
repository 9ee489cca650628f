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

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mtqc/evaluation.hpp"
#include "mtqc/pulse_file.hpp"
#include "mtqc/robustness.hpp"
#include "mtqc/run_config.hpp"

// Experiment drivers behind the mtqc command-line tool. Every driver writes
// into runs/<name>/{config,checkpoints,logs,results} and is deterministic
// given the run config.
namespace mtqc {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitRuntime = 2 };

struct RunLayout {
  std::filesystem::path root;
  std::filesystem::path config;
  std::filesystem::path checkpoints;
  std::filesystem::path logs;
  std::filesystem::path results;

  /// Creates the directories and writes config/run.json.
  static RunLayout create(const RunConfig& config);
};

/// Plain-text table of the selected systems, or the catalog JSON when
/// `export_path` is given.
void cmd_catalog(const std::string& selector, const std::optional<std::string>& export_path, std::ostream& out);

struct TrainOutcome {
  std::string checkpoint;
  std::size_t episodes = 0;
  std::uint64_t env_steps = 0;
};
TrainOutcome cmd_train(const RunConfig& config, std::ostream& out);

struct EvalOutcome {
  std::vector<EvaluationRecord> records;
  EvalSummary summary;
};
/// Refuses checkpoints trained against a different catalog.
EvalOutcome cmd_eval(const RunConfig& config, const std::string& checkpoint, std::ostream& out);

struct ExpansionStage {
  int size = 0;
  std::vector<std::string> trained;
  double full_success_rate = 0.0;
  /// Unset for the final stage when nothing is held out.
  std::optional<double> held_out_success_rate;
  int held_out_solved = 0;
  int held_out_total = 0;
};
/// Stage ids are nested: the first five are the Table-1 set, later ones
/// add a seeded-uniform draw from the remaining catalog.
std::vector<std::vector<std::string>> expansion_sets(const std::vector<int>& stages, std::uint64_t seed);
std::vector<ExpansionStage> cmd_expand(const RunConfig& config, std::ostream& out);

/// With `pulses_path`, GRAPE runs at each pulse's T and N (the comparison
/// protocol); otherwise at grape.T / grape.N for eval.experiments seeds.
PulseSet cmd_grape(const RunConfig& config, const std::optional<std::string>& pulses_path, std::ostream& out);

RimReport cmd_rim(const RunConfig& config, const std::string& pulses_path, const std::string& label,
                  std::ostream& out);

struct GapRow {
  std::string model;  // "closed" or "open"
  double gamma = 0.0;
  std::string system_id;
  double mean_fidelity = 0.0;
  double success_rate = 0.0;
};
std::vector<GapRow> cmd_gap(const RunConfig& config, const std::string& closed_checkpoint,
                            const std::string& open_checkpoint, std::ostream& out);

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<int> counts;
};
/// Equal-width bins on [lo, hi]; values outside are clamped into the end
/// bins so the counts always sum to values.size().
Histogram histogram(const std::vector<double>& values, int bins, double lo, double hi);
nlohmann::json to_json(const Histogram& h);

/// Binned distributions from an eval-records or RIM report JSON.
nlohmann::json plot_data(const nlohmann::json& results, int bins);
void cmd_export(const std::string& input, const std::string& output, int bins, std::ostream& out);

/// Writes CSV text with a leading "# config_hash=" comment line.
void write_csv(const std::filesystem::path& path, const std::string& hash, const std::string& body);

}  // namespace mtqc
