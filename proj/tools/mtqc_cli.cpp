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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtqc/checkpoint.hpp"
#include "mtqc/commands.hpp"
#include "mtqc/run_config.hpp"

namespace {

using mtqc::RunConfig;

// Flags shared by the experiment subcommands. Anything set here overrides
// the value from --config.
struct Overrides {
  std::string config_path;
  std::optional<std::string> name, runs_dir, systems, mode;
  std::optional<double> gamma, fixed_time, total_time;
  std::optional<int> fixed_segments, segments, experiments, trials, workers, restarts;
  std::optional<std::uint64_t> seed, steps;
  std::vector<std::string> kinds;
  std::vector<int> stages;
  std::vector<double> gammas;

  void attach(CLI::App* app, bool train_flags) {
    app->add_option("--config", config_path, "Run configuration file (JSON)")->check(CLI::ExistingFile);
    app->add_option("--name", name, "Run name (directory under --runs-dir)");
    app->add_option("--runs-dir", runs_dir, "Root directory for run outputs");
    app->add_option("--systems,--system", systems, "Catalog ids or all|table1|single|two|three");
    app->add_option("--mode", mode, "closed or open")->check(CLI::IsMember({"closed", "open"}));
    app->add_option("--gamma", gamma, "Amplitude-damping rate");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--workers", workers, "Worker threads for fan-out");
    app->add_option("--experiments", experiments, "Experiments per system");
    app->add_option("--trials", trials, "Rollouts per experiment");
    app->add_option("--fixed-T", fixed_time, "Hold T at this value instead of learning it");
    app->add_option("--fixed-N", fixed_segments, "Hold N at this value instead of learning it");
    if (train_flags) app->add_option("--steps", steps, "Environment-step budget");
  }

  RunConfig resolve() const {
    nlohmann::json j = mtqc::to_json(config_path.empty() ? RunConfig{} : mtqc::load_run_config(config_path));
    if (name) j["name"] = *name;
    if (runs_dir) j["runs_dir"] = *runs_dir;
    if (systems) j["systems"] = *systems;
    if (mode) j["mode"] = *mode;
    if (gamma) j["gamma"] = *gamma;
    if (seed) j["seed"] = *seed;
    if (workers) j["workers"] = *workers;
    if (experiments) j["eval"]["experiments"] = *experiments;
    if (trials) j["eval"]["trials"] = *trials;
    if (fixed_time) j["env"]["fixed_T"] = *fixed_time;
    if (fixed_segments) j["env"]["fixed_N"] = *fixed_segments;
    if (steps) j["train"]["total_steps"] = *steps;
    if (total_time) j["grape"]["T"] = *total_time;
    if (segments) j["grape"]["N"] = *segments;
    if (restarts) j["grape"]["restarts"] = *restarts;
    if (!kinds.empty()) j["rim"]["kinds"] = kinds;
    if (!stages.empty()) j["expand"]["stages"] = stages;
    if (!gammas.empty()) j["gap"]["gammas"] = gammas;
    return mtqc::run_config_from_json(j);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-task quantum control: training, evaluation, GRAPE and robustness experiments"};
  app.require_subcommand(1);

  std::string selector = "all";
  std::optional<std::string> export_path;
  auto* catalog = app.add_subcommand("catalog", "List or export the Hamiltonian catalog");
  catalog->add_option("--systems,--system", selector, "Catalog selector");
  catalog->add_option("--export", export_path, "Write the catalog as JSON to this path");

  Overrides train_o, eval_o, expand_o, grape_o, rim_o, gap_o;
  auto* train = app.add_subcommand("train", "Train a multi-task SAC agent");
  train_o.attach(train, true);

  std::string checkpoint;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint under the experiments x trials protocol");
  eval_o.attach(eval, false);
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);

  auto* expand = app.add_subcommand("expand", "Progressive training-set expansion study");
  expand_o.attach(expand, true);
  expand->add_option("--stages", expand_o.stages, "Training-set sizes, increasing");

  std::optional<std::string> grape_pulses;
  auto* grape = app.add_subcommand("grape", "GRAPE optimization at given or SAC-chosen T and N");
  grape_o.attach(grape, false);
  grape->add_option("--T", grape_o.total_time, "Evolution time");
  grape->add_option("--N", grape_o.segments, "Number of segments");
  grape->add_option("--restarts", grape_o.restarts, "Random restarts");
  grape->add_option("--from-pulses", grape_pulses, "Take T and N from this pulse file")->check(CLI::ExistingFile);

  std::string rim_pulses;
  std::string rim_source = "sac";
  auto* rim = app.add_subcommand("rim", "Robustness infidelity campaign over a pulse file");
  rim_o.attach(rim, false);
  rim->add_option("--pulses", rim_pulses, "Pulse file")->required()->check(CLI::ExistingFile);
  rim->add_option("--source", rim_source, "Label for the pulse source (sac, grape, ...)");
  rim->add_option("--kind", rim_o.kinds, "pulse, decoherence and/or combined")
      ->check(CLI::IsMember({"pulse", "decoherence", "combined"}));

  std::string closed_ckpt, open_ckpt;
  auto* gap = app.add_subcommand("gap", "Closed-trained vs open-trained models under decoherence");
  gap_o.attach(gap, false);
  gap->add_option("--closed", closed_ckpt, "Closed-trained checkpoint")->required()->check(CLI::ExistingFile);
  gap->add_option("--open", open_ckpt, "Open-trained checkpoint")->required()->check(CLI::ExistingFile);
  gap->add_option("--gammas", gap_o.gammas, "Damping rates to evaluate at");

  std::string input, output;
  int bins = 20;
  auto* exp = app.add_subcommand("export", "Binned plot data from an eval-records or RIM report JSON");
  exp->add_option("--input", input, "Results JSON")->required()->check(CLI::ExistingFile);
  exp->add_option("--output", output, "Plot-data JSON")->required();
  exp->add_option("--bins", bins, "Number of bins")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mtqc::kExitOk : mtqc::kExitUsage;
  }

  std::ostream& out = std::cout;
  try {
    if (*catalog) {
      mtqc::cmd_catalog(selector, export_path, out);
    } else if (*train) {
      mtqc::cmd_train(train_o.resolve(), out);
    } else if (*eval) {
      mtqc::cmd_eval(eval_o.resolve(), checkpoint, out);
    } else if (*expand) {
      mtqc::cmd_expand(expand_o.resolve(), out);
    } else if (*grape) {
      mtqc::cmd_grape(grape_o.resolve(), grape_pulses, out);
    } else if (*rim) {
      mtqc::cmd_rim(rim_o.resolve(), rim_pulses, rim_source, out);
    } else if (*gap) {
      mtqc::cmd_gap(gap_o.resolve(), closed_ckpt, open_ckpt, out);
    } else if (*exp) {
      mtqc::cmd_export(input, output, bins, out);
    }
  } catch (const mtqc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return mtqc::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mtqc::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mtqc::kExitRuntime;
  }
  return mtqc::kExitOk;
}
