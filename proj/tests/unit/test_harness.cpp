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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "mtqc/checkpoint.hpp"
#include "mtqc/commands.hpp"
#include "mtqc/evaluation.hpp"
#include "mtqc/pulse_file.hpp"
#include "mtqc/run_config.hpp"

namespace mtqc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mtqc_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(RunConfig, DefaultsRoundTrip) {
  const RunConfig c;
  const RunConfig back = run_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(c.eval.experiments, 30);
  EXPECT_EQ(c.eval.trials, 25);
  EXPECT_EQ(c.eval.success_threshold, 0.95);
}

TEST(RunConfig, PartialDocumentKeepsDefaults) {
  const RunConfig c = run_config_from_json(json::parse(R"({"mode": "closed", "train": {"total_steps": 10}})"));
  EXPECT_EQ(c.mode, DynamicsMode::kClosed);
  EXPECT_EQ(c.train.total_steps, 10u);
  EXPECT_EQ(c.train.warmup_steps, 1000u);
  EXPECT_EQ(c.env_config().f_min, 0.999);
  EXPECT_EQ(c.env_config().gamma, 0.0);
}

TEST(RunConfig, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(run_config_from_json(json::parse(R"({"sead": 1})")), ConfigError);
  EXPECT_THROW(run_config_from_json(json::parse(R"({"sac": {"learning_rate": 1}})")), ConfigError);
  EXPECT_THROW(run_config_from_json(json::parse(R"({"eval": {"experiments": "thirty"}})")), ConfigError);
  EXPECT_THROW(run_config_from_json(json::parse(R"({"mode": "half-open"})")), ConfigError);
  EXPECT_THROW(run_config_from_json(json::parse(R"({"gamma": -1})")), ConfigError);
  EXPECT_THROW(run_config_from_json(json::parse(R"([1, 2])")), ConfigError);
}

TEST(RunConfig, HashIgnoresWorkers) {
  RunConfig a;
  RunConfig b;
  b.workers = 8;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.seed = 3;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(RunConfig, LoadsFileWithComments) {
  const fs::path dir = scratch_dir("config");
  std::ofstream(dir / "run.json") << "{\n  // closed SQ2 run\n  \"systems\": \"SQ2\",\n  \"seed\": 4\n}\n";
  const RunConfig c = load_run_config((dir / "run.json").string());
  EXPECT_EQ(c.systems, "SQ2");
  EXPECT_EQ(c.seed, 4u);
  EXPECT_THROW(load_run_config((dir / "missing.json").string()), ConfigError);
}

TEST(RunConfig, PerturbationModelsFollowKinds) {
  RunConfig c;
  c.rim.kinds = {PerturbationKind::kCombined};
  c.rim.samples = 7;
  const auto models = c.perturbation_models();
  ASSERT_EQ(models.size(), 1u);
  EXPECT_EQ(models[0].kind, PerturbationKind::kCombined);
  EXPECT_EQ(models[0].samples, 7);
}

// Drives SQ2 (zero Z control, pure X rotation) for exactly T = pi/2 in two
// segments, which lands on |1> with unit fidelity.
class FlipPolicy final : public Policy {
 public:
  explicit FlipPolicy(double total_time) : t_(total_time) {}
  AgentAction act(const Observation&, std::mt19937_64&) const override {
    AgentAction a;
    a.raw[0] = 2.0 * (t_ - 1.0) / 19.0 - 1.0;
    a.raw[1] = -1.0;
    return a;
  }

 private:
  double t_;
};

TEST(Evaluation, OracleStubSucceedsEverywhere) {
  const std::vector<CatalogEntry> systems = {find_entry(build_catalog(), "SQ2")};
  EvalProtocol p;
  p.experiments = 4;
  p.trials = 3;
  p.workers = 2;
  const auto records = evaluate(systems, EnvConfig::closed(), FlipPolicy(std::numbers::pi / 2), p);
  ASSERT_EQ(records.size(), 4u);
  for (const auto& r : records) {
    EXPECT_TRUE(r.success);
    EXPECT_NEAR(r.fidelity, 1.0, 1e-9);
    EXPECT_EQ(r.chosen_segments, 2);
    EXPECT_NEAR(r.effective_time, std::numbers::pi / 2, 1e-12);
  }
  const auto summary = summarize(records, 0.95);
  EXPECT_EQ(summary.success_rate, 100.0);
  EXPECT_EQ(summary.systems.at(0).successes, 4);
}

TEST(Evaluation, WeakStubFails) {
  const std::vector<CatalogEntry> systems = {find_entry(build_catalog(), "SQ2")};
  EvalProtocol p;
  p.experiments = 2;
  p.trials = 2;
  const auto records = evaluate(systems, EnvConfig::closed(), FlipPolicy(1.0), p);
  const double f = std::sin(1.0) * std::sin(1.0);
  for (const auto& r : records) {
    EXPECT_NEAR(r.fidelity, f, 1e-12);
    EXPECT_FALSE(r.success);
  }
  EXPECT_EQ(summarize(records, 0.95).success_rate, 0.0);
}

EvaluationRecord rec(std::string id, int exp, double f, double t, int n) {
  EvaluationRecord r;
  r.system_id = std::move(id);
  r.experiment = exp;
  r.fidelity = f;
  r.chosen_time = t;
  r.chosen_segments = n;
  r.effective_time = t / 2;
  r.effective_segments = n / 2;
  r.success = f >= 0.95;
  return r;
}

TEST(Evaluation, SummaryArithmetic) {
  const std::vector<EvaluationRecord> records = {rec("SQ2", 0, 0.99, 2, 4), rec("SQ2", 1, 0.5, 4, 8),
                                                 rec("TQ1", 0, 0.96, 6, 10), rec("TQ1", 1, 0.97, 8, 12)};
  const auto s = summarize(records, 0.95);
  EXPECT_EQ(s.records, 4);
  EXPECT_EQ(s.successes, 3);
  EXPECT_DOUBLE_EQ(s.success_rate, 75.0);
  ASSERT_EQ(s.systems.size(), 2u);
  EXPECT_EQ(s.systems[0].system_id, "SQ2");
  EXPECT_DOUBLE_EQ(s.systems[0].success_rate, 50.0);
  EXPECT_DOUBLE_EQ(s.systems[1].success_rate, 100.0);
  EXPECT_DOUBLE_EQ(s.chosen_time.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.chosen_time.median, 5.0);
  EXPECT_DOUBLE_EQ(s.effective_segments.min, 2.0);
  EXPECT_DOUBLE_EQ(s.fidelity.max, 0.99);
  const json j = to_json(s);
  EXPECT_TRUE(j.contains("effective_T"));
  EXPECT_TRUE(j["effective_T"].contains("median"));
  EXPECT_TRUE(j["effective_T"].contains("mean"));
}

TEST(Evaluation, DescribeEdgeCases) {
  const Stats odd = describe({3, 1, 2});
  EXPECT_EQ(odd.median, 2);
  EXPECT_EQ(odd.mean, 2);
  const Stats empty = describe({});
  EXPECT_EQ(empty.mean, 0.0);
}

TEST(Expansion, NestedSetsStartFromBaseFive) {
  const std::vector<int> stages = {5, 10, 20, 30, 40, 51};
  const auto sets = expansion_sets(stages, 3);
  ASSERT_EQ(sets.size(), stages.size());
  EXPECT_EQ(sets[0], table1_ids());
  const auto& all = sets.back();
  EXPECT_EQ(std::set<std::string>(all.begin(), all.end()).size(), 51u);
  EXPECT_EQ(51 - static_cast<int>(sets[0].size()), 46);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    EXPECT_EQ(static_cast<int>(sets[s].size()), stages[s]);
    if (s > 0) {
      EXPECT_TRUE(std::equal(sets[s - 1].begin(), sets[s - 1].end(), sets[s].begin()));
    }
  }
  EXPECT_EQ(expansion_sets(stages, 3), sets);
  EXPECT_NE(expansion_sets(stages, 4)[1], sets[1]);
}

TEST(Export, HistogramCountsEverything) {
  const std::vector<double> v = {-0.5, 0.0, 0.1, 0.25, 0.5, 0.99, 1.0, 1.7};
  const Histogram h = histogram(v, 4, 0.0, 1.0);
  ASSERT_EQ(h.edges.size(), 5u);
  ASSERT_EQ(h.counts.size(), 4u);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), 0), static_cast<int>(v.size()));
  EXPECT_EQ(h.counts, (std::vector<int>{3, 1, 1, 3}));
  EXPECT_THROW(histogram(v, 0, 0.0, 1.0), std::invalid_argument);
}

TEST(PulseFile, RoundTrip) {
  PulseSet set;
  set.source = "grape";
  set.config_hash = "0123456789abcdef";
  PulseFileEntry p;
  p.system_id = "TQ26";
  p.experiment = 3;
  p.schedule.total_time = 2.5;
  p.schedule.amplitudes = AmplitudeMatrix::Random(4, 2);
  p.mode = DynamicsMode::kClosed;
  p.gamma = 0.0;
  p.seed = 99;
  p.nominal_fidelity = 0.97;
  set.pulses = {p, p};
  set.pulses[1].experiment = 4;

  const fs::path dir = scratch_dir("pulses");
  write_json_file((dir / "p.json").string(), to_json(set));
  const PulseSet back = pulse_set_from_json(read_json_file((dir / "p.json").string()));
  EXPECT_EQ(back.source, "grape");
  EXPECT_EQ(back.config_hash, set.config_hash);
  ASSERT_EQ(back.pulses.size(), 2u);
  EXPECT_EQ(back.pulses[1].experiment, 4);
  EXPECT_EQ(back.pulses[0].schedule.amplitudes, p.schedule.amplitudes);
  EXPECT_EQ(back.pulses[0].schedule.total_time, 2.5);
  EXPECT_EQ(back.pulses[0].mode, DynamicsMode::kClosed);
  EXPECT_EQ(back.pulses[0].seed, 99u);

  const PulseSet single = pulse_set_from_json(to_json(p));
  EXPECT_EQ(single.pulses.size(), 1u);
  EXPECT_THROW(pulse_from_json(json::parse(R"({"system_id": "SQ2"})")), std::exception);
}

TEST(Csv, CarriesConfigHash) {
  const fs::path dir = scratch_dir("csv");
  write_csv(dir / "x.csv", "abc", "a,b\n1,2\n");
  std::ifstream f(dir / "x.csv");
  std::string first;
  std::getline(f, first);
  EXPECT_EQ(first, "# config_hash=abc");
}

TEST(Commands, CatalogListingAndExport) {
  std::ostringstream out;
  cmd_catalog("SQ2,ThQ1", std::nullopt, out);
  EXPECT_NE(out.str().find("SQ2"), std::string::npos);
  EXPECT_NE(out.str().find("ThQ1"), std::string::npos);
  const fs::path dir = scratch_dir("catalog");
  cmd_catalog("all", (dir / "cat.json").string(), out);
  EXPECT_EQ(read_json_file((dir / "cat.json").string()), catalog_to_json(build_catalog()));
}

RunConfig tiny_run(const fs::path& runs, const std::string& name) {
  RunConfig c;
  c.name = name;
  c.runs_dir = runs.string();
  c.systems = "SQ2";
  c.mode = DynamicsMode::kClosed;
  c.gamma = 0.0;
  c.seed = 5;
  c.train.total_steps = 200;
  c.train.warmup_steps = 50;
  c.sac.hidden = {16, 16};
  c.sac.batch_size = 16;
  c.sac.buffer_capacity = 1000;
  c.eval.experiments = 2;
  c.eval.trials = 2;
  return c;
}

TEST(Commands, TrainEvalGrapeRimPipeline) {
  const fs::path runs = scratch_dir("pipeline");
  std::ostringstream out;
  RunConfig c = tiny_run(runs, "tiny");
  const auto trained = cmd_train(c, out);
  EXPECT_TRUE(fs::exists(trained.checkpoint));
  EXPECT_EQ(trained.env_steps, 200u);
  const fs::path root = runs / "tiny";
  EXPECT_TRUE(fs::exists(root / "config" / "run.json"));
  EXPECT_TRUE(fs::exists(root / "logs" / "train.jsonl"));

  const auto eval = cmd_eval(c, trained.checkpoint, out);
  EXPECT_EQ(eval.records.size(), 2u);
  for (const char* f : {"eval_records.csv", "eval_records.json", "eval_summary.json", "sac_pulses.json"}) {
    EXPECT_TRUE(fs::exists(root / "results" / f)) << f;
  }
  const PulseSet sac = pulse_set_from_json(read_json_file((root / "results" / "sac_pulses.json").string()));
  EXPECT_EQ(sac.source, "sac");
  EXPECT_EQ(sac.config_hash, config_hash(c));

  c.grape.total_time = 3.0;
  c.grape.segments = 10;
  c.grape.optimizer.restarts = 2;
  const PulseSet grape = cmd_grape(c, std::nullopt, out);
  ASSERT_EQ(grape.pulses.size(), 2u);
  EXPECT_GE(grape.pulses[0].nominal_fidelity, 0.999);

  c.rim.samples = 3;
  const RimReport report = cmd_rim(c, (root / "results" / "grape_pulses.json").string(), "grape", out);
  EXPECT_EQ(report.aggregates.size(), 3u);
  EXPECT_TRUE(fs::exists(root / "results" / "rim_grape.csv"));

  // Reruns are byte-identical.
  std::ifstream first(root / "results" / "rim_grape.json");
  const std::string before((std::istreambuf_iterator<char>(first)), {});
  cmd_rim(c, (root / "results" / "grape_pulses.json").string(), "grape", out);
  std::ifstream second(root / "results" / "rim_grape.json");
  EXPECT_EQ(before, std::string((std::istreambuf_iterator<char>(second)), {}));

  const fs::path plot = root / "results" / "plot.json";
  cmd_export((root / "results" / "eval_records.json").string(), plot.string(), 10, out);
  EXPECT_TRUE(fs::exists(plot));
}

TEST(Commands, EvalRefusesForeignCatalogHash) {
  const fs::path runs = scratch_dir("foreign");
  std::ostringstream out;
  const RunConfig c = tiny_run(runs, "foreign");
  Agent agent(c.train_config(0).sac, 1);
  const std::string path = (runs / "foreign.ckpt").string();
  save_checkpoint(agent, 12345, path);
  EXPECT_THROW(cmd_eval(c, path, out), std::runtime_error);
}

}  // namespace
}  // namespace mtqc
