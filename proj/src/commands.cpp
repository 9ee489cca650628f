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

#include "mtqc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mtqc/catalog.hpp"
#include "mtqc/checkpoint.hpp"
#include "mtqc/grape.hpp"
#include "mtqc/seeding.hpp"
#include "mtqc/trainer.hpp"

namespace mtqc {

namespace fs = std::filesystem;

namespace {

std::vector<CatalogEntry> select(const std::string& selector) {
  const auto& catalog = build_catalog();
  std::vector<CatalogEntry> out;
  for (const auto& id : resolve_system_ids(catalog, selector)) out.push_back(find_entry(catalog, id));
  return out;
}

std::vector<CatalogEntry> select(const std::vector<std::string>& ids) {
  const auto& catalog = build_catalog();
  std::vector<CatalogEntry> out;
  for (const auto& id : ids) out.push_back(find_entry(catalog, id));
  return out;
}

Agent load_agent(const std::string& path) {
  LoadedCheckpoint ckpt = load_checkpoint(path);
  if (ckpt.catalog_hash != catalog_hash(build_catalog())) {
    throw std::runtime_error("checkpoint " + path + " was trained against a different catalog");
  }
  return std::move(ckpt.agent);
}

std::string records_csv(const std::vector<EvaluationRecord>& records) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "system_id,experiment,fidelity,chosen_T,chosen_N,effective_T,effective_N,success\n";
  for (const auto& r : records) {
    os << r.system_id << ',' << r.experiment << ',' << r.fidelity << ',' << r.chosen_time << ','
       << r.chosen_segments << ',' << r.effective_time << ',' << r.effective_segments << ','
       << (r.success ? 1 : 0) << '\n';
  }
  return os.str();
}

nlohmann::json records_json(const std::vector<EvaluationRecord>& records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records) {
    out.push_back({{"system_id", r.system_id},
                   {"experiment", r.experiment},
                   {"fidelity", r.fidelity},
                   {"chosen_T", r.chosen_time},
                   {"chosen_N", r.chosen_segments},
                   {"effective_T", r.effective_time},
                   {"effective_N", r.effective_segments},
                   {"success", r.success}});
  }
  return out;
}

}  // namespace

RunLayout RunLayout::create(const RunConfig& config) {
  RunLayout l;
  l.root = fs::path(config.runs_dir) / config.name;
  l.config = l.root / "config";
  l.checkpoints = l.root / "checkpoints";
  l.logs = l.root / "logs";
  l.results = l.root / "results";
  for (const auto& d : {l.config, l.checkpoints, l.logs, l.results}) fs::create_directories(d);
  nlohmann::json j = to_json(config);
  j["config_hash"] = config_hash(config);
  write_json_file((l.config / "run.json").string(), j);
  return l;
}

void write_csv(const fs::path& path, const std::string& hash, const std::string& body) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << "# config_hash=" << hash << '\n' << body;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void cmd_catalog(const std::string& selector, const std::optional<std::string>& export_path, std::ostream& out) {
  const auto entries = select(selector);
  if (export_path) {
    write_json_file(*export_path, catalog_to_json(entries));
    out << "wrote " << entries.size() << " systems to " << *export_path << '\n';
    return;
  }
  out << std::left << std::setw(6) << "id" << std::setw(4) << "d" << std::setw(4) << "m" << std::setw(7) << "c3"
      << std::setw(5) << "xyz" << std::setw(7) << "scale" << "transfer\n";
  for (const auto& e : entries) {
    const auto& d = e.descriptor;
    std::string xyz;
    xyz += d.has_x ? 'x' : '-';
    xyz += d.has_y ? 'y' : '-';
    xyz += d.has_z ? 'z' : '-';
    out << std::setw(6) << e.id << std::setw(4) << e.dim() << std::setw(4) << e.n_controls() << std::setw(7)
        << d.static_strength << std::setw(5) << xyz << std::setw(7) << e.amplitude_scale << e.initial_name
        << " -> " << e.target_name << '\n';
  }
}

TrainOutcome cmd_train(const RunConfig& config, std::ostream& out) {
  config.validate();
  const RunLayout layout = RunLayout::create(config);
  const auto systems = select(config.systems);
  TrainConfig tc = config.train_config(catalog_hash(build_catalog()));
  if (tc.checkpoint_every > 0) tc.checkpoint_dir = layout.checkpoints.string();

  std::ofstream log(layout.logs / "train.jsonl", std::ios::trunc);
  if (!log) throw std::runtime_error("cannot open training log");
  const std::uint64_t report_every = std::max<std::uint64_t>(1, tc.total_steps / 20);
  std::uint64_t next_report = report_every;
  TrainResult result = train(systems, tc, [&](const EpisodeLog& e, const Agent&) {
    log << to_json(e).dump() << '\n';
    if (e.env_steps >= next_report) {
      out << "step " << e.env_steps << "/" << tc.total_steps << "  episode " << e.episode << "  " << e.system_id
          << "  F=" << e.final_fidelity << "  alpha=" << e.alpha << '\n';
      next_report += report_every;
    }
    return false;
  });
  const std::string path = (layout.checkpoints / "final.ckpt").string();
  save_checkpoint(result.agent, tc.catalog_hash, path);
  out << "trained " << result.env_steps << " steps over " << result.episodes.size() << " episodes; checkpoint "
      << path << '\n';
  return {path, result.episodes.size(), result.env_steps};
}

EvalOutcome cmd_eval(const RunConfig& config, const std::string& checkpoint, std::ostream& out) {
  config.validate();
  const Agent agent = load_agent(checkpoint);
  const RunLayout layout = RunLayout::create(config);
  const auto systems = select(config.systems);
  const AgentPolicy policy(agent, config.eval.deterministic);
  EvalOutcome o;
  o.records = evaluate(systems, config.env_config(), policy, config.eval);
  o.summary = summarize(o.records, config.eval.success_threshold);

  const std::string hash = config_hash(config);
  write_csv(layout.results / "eval_records.csv", hash, records_csv(o.records));
  write_json_file((layout.results / "eval_records.json").string(),
                  {{"config_hash", hash}, {"records", records_json(o.records)}});
  nlohmann::json summary = to_json(o.summary);
  summary["config_hash"] = hash;
  summary["checkpoint"] = checkpoint;
  write_json_file((layout.results / "eval_summary.json").string(), summary);

  PulseSet pulses;
  pulses.source = "sac";
  pulses.config_hash = hash;
  const EnvConfig env = config.env_config();
  for (const auto& r : o.records) {
    PulseFileEntry p;
    p.system_id = r.system_id;
    p.experiment = r.experiment;
    p.schedule = r.schedule;
    p.mode = env.mode;
    p.gamma = env.gamma;
    p.seed = config.eval.seed;
    p.nominal_fidelity = r.fidelity;
    if (p.schedule.segments() > 0) pulses.pulses.push_back(std::move(p));
  }
  write_json_file((layout.results / "sac_pulses.json").string(), to_json(pulses));

  for (const auto& s : o.summary.systems) {
    out << std::left << std::setw(6) << s.system_id << " success " << std::setw(6) << s.success_rate
        << "% mean F " << s.mean_fidelity << '\n';
  }
  out << "overall success " << o.summary.success_rate << "% over " << o.summary.records << " experiments; "
      << "effective T median " << o.summary.effective_time.median << " mean " << o.summary.effective_time.mean
      << "; effective N median " << o.summary.effective_segments.median << " mean "
      << o.summary.effective_segments.mean << '\n';
  return o;
}

std::vector<std::vector<std::string>> expansion_sets(const std::vector<int>& stages, std::uint64_t seed) {
  const auto& catalog = build_catalog();
  std::vector<std::string> order = table1_ids();
  std::vector<std::string> rest;
  for (const auto& e : catalog) {
    if (std::find(order.begin(), order.end(), e.id) == order.end()) rest.push_back(e.id);
  }
  std::mt19937_64 rng(derive_seed(seed, {hash_string("expand")}));
  std::shuffle(rest.begin(), rest.end(), rng);
  order.insert(order.end(), rest.begin(), rest.end());
  std::vector<std::vector<std::string>> out;
  for (int s : stages) {
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(s), order.size());
    out.emplace_back(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return out;
}

std::vector<ExpansionStage> cmd_expand(const RunConfig& config, std::ostream& out) {
  config.validate();
  const RunLayout layout = RunLayout::create(config);
  const auto& catalog = build_catalog();
  const auto sets = expansion_sets(config.expand.stages, config.seed);
  const std::uint64_t hash = catalog_hash(catalog);
  std::vector<ExpansionStage> stages;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    ExpansionStage st;
    st.size = static_cast<int>(sets[s].size());
    st.trained = sets[s];
    TrainConfig tc = config.train_config(hash);
    tc.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(st.size)});
    out << "stage " << st.size << ": training on " << st.size << " systems\n";
    const TrainResult trained = train(select(sets[s]), tc);
    save_checkpoint(trained.agent, hash, (layout.checkpoints / ("stage_" + std::to_string(st.size) + ".ckpt")).string());

    const AgentPolicy policy(trained.agent, config.eval.deterministic);
    const auto records = evaluate(catalog, config.env_config(), policy, config.eval);
    const EvalSummary summary = summarize(records, config.eval.success_threshold);
    st.full_success_rate = summary.success_rate;
    const std::set<std::string> in_train(sets[s].begin(), sets[s].end());
    int held_records = 0;
    int held_successes = 0;
    for (const auto& sys : summary.systems) {
      if (in_train.count(sys.system_id)) continue;
      ++st.held_out_total;
      held_records += sys.experiments;
      held_successes += sys.successes;
      if (sys.success_rate >= 100.0 * config.expand.solved_fraction) ++st.held_out_solved;
    }
    if (held_records > 0) st.held_out_success_rate = 100.0 * held_successes / held_records;
    out << "stage " << st.size << ": full " << st.full_success_rate << "%";
    if (st.held_out_success_rate) {
      out << ", held-out " << *st.held_out_success_rate << "% (" << st.held_out_solved << "/" << st.held_out_total
          << " systems)";
    }
    out << '\n';
    stages.push_back(std::move(st));
  }

  const std::string chash = config_hash(config);
  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "stage,full_success_rate,held_out_success_rate,held_out_solved,held_out_total\n";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& st : stages) {
    csv << st.size << ',' << st.full_success_rate << ',';
    if (st.held_out_success_rate) csv << *st.held_out_success_rate;
    csv << ',' << st.held_out_solved << ',' << st.held_out_total << '\n';
    rows.push_back({{"stage", st.size},
                    {"trained", st.trained},
                    {"full_success_rate", st.full_success_rate},
                    {"held_out_success_rate",
                     st.held_out_success_rate ? nlohmann::json(*st.held_out_success_rate) : nlohmann::json()},
                    {"held_out_solved", st.held_out_solved},
                    {"held_out_total", st.held_out_total}});
  }
  write_csv(layout.results / "expansion.csv", chash, csv.str());
  write_json_file((layout.results / "expansion.json").string(),
                  {{"config_hash", chash}, {"seed", config.seed}, {"stages", rows}});
  return stages;
}

PulseSet cmd_grape(const RunConfig& config, const std::optional<std::string>& pulses_path, std::ostream& out) {
  config.validate();
  const RunLayout layout = RunLayout::create(config);
  const auto& catalog = build_catalog();
  GrapeConfig gc = config.grape.optimizer;
  gc.u_max = config.env.u_max;
  const double gamma = config.mode == DynamicsMode::kClosed ? 0.0 : config.gamma;

  struct Job {
    std::string id;
    int experiment;
    double total_time;
    int segments;
  };
  std::vector<Job> jobs;
  if (pulses_path) {
    const PulseSet source = pulse_set_from_json(read_json_file(*pulses_path));
    for (const auto& p : source.pulses) {
      jobs.push_back({p.system_id, p.experiment, p.schedule.total_time, p.schedule.segments()});
    }
  } else {
    if (!config.grape.total_time || !config.grape.segments) {
      throw ConfigError("grape needs T and N, or a pulse file to take them from");
    }
    for (const auto& id : resolve_system_ids(catalog, config.systems)) {
      for (int e = 0; e < config.eval.experiments; ++e) {
        jobs.push_back({id, e, *config.grape.total_time, *config.grape.segments});
      }
    }
  }

  PulseSet set;
  set.source = "grape";
  set.config_hash = config_hash(config);
  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "system_id,experiment,T,N,fidelity,iterations,converged\n";
  for (const auto& job : jobs) {
    const CatalogEntry& entry = find_entry(catalog, job.id);
    const std::uint64_t seed =
        derive_seed(config.seed, {hash_string(job.id), static_cast<std::uint64_t>(job.experiment)});
    const GrapeResult r = grape_optimize(entry, job.total_time, job.segments, config.mode, gamma, gc, seed);
    PulseFileEntry p;
    p.system_id = job.id;
    p.experiment = job.experiment;
    p.schedule = r.schedule;
    p.mode = config.mode;
    p.gamma = gamma;
    p.seed = seed;
    p.nominal_fidelity = r.fidelity;
    set.pulses.push_back(std::move(p));
    csv << job.id << ',' << job.experiment << ',' << job.total_time << ',' << job.segments << ',' << r.fidelity
        << ',' << r.trace.size() - 1 << ',' << (r.converged ? 1 : 0) << '\n';
    out << job.id << " #" << job.experiment << "  T=" << job.total_time << " N=" << job.segments
        << "  F=" << r.fidelity << '\n';
  }
  write_csv(layout.results / "grape.csv", set.config_hash, csv.str());
  write_json_file((layout.results / "grape_pulses.json").string(), to_json(set));
  return set;
}

RimReport cmd_rim(const RunConfig& config, const std::string& pulses_path, const std::string& label,
                  std::ostream& out) {
  config.validate();
  const RunLayout layout = RunLayout::create(config);
  const PulseSet set = pulse_set_from_json(read_json_file(pulses_path));
  const auto allowed = resolve_system_ids(build_catalog(), config.systems);
  const std::set<std::string> keep(allowed.begin(), allowed.end());
  std::vector<PulseRecord> pulses;
  for (const auto& p : set.pulses) {
    if (keep.count(p.system_id)) pulses.push_back(p.record());
  }
  if (pulses.empty()) throw std::runtime_error("rim: no pulses for the selected systems in " + pulses_path);

  RimCampaignConfig rc;
  rc.models = config.perturbation_models();
  rc.nominal_threshold = config.rim.nominal_threshold;
  rc.seed = config.seed;
  rc.workers = config.workers;
  const RimReport report = rim_campaign(build_catalog(), pulses, rc);

  const std::string hash = config_hash(config);
  write_csv(layout.results / ("rim_" + label + ".csv"), hash, rim_rows_csv(report));
  nlohmann::json j = to_json(report);
  j["config_hash"] = hash;
  j["source"] = label;
  write_json_file((layout.results / ("rim_" + label + ".json")).string(), j);
  nlohmann::json plot = plot_data(j, 20);
  plot["config_hash"] = hash;
  write_json_file((layout.results / ("rim_" + label + "_plot.json")).string(), plot);

  for (const auto& a : report.aggregates) {
    out << label << " " << to_string(a.kind) << ": mean RIM " << a.rim.mean << ", median " << a.rim.median
        << " over " << a.count << " pulses\n";
  }
  if (!report.excluded.empty()) {
    out << "excluded (no pulse above " << rc.nominal_threshold << "):";
    for (const auto& id : report.excluded) out << ' ' << id;
    out << '\n';
  }
  return report;
}

std::vector<GapRow> cmd_gap(const RunConfig& config, const std::string& closed_checkpoint,
                            const std::string& open_checkpoint, std::ostream& out) {
  config.validate();
  const Agent closed_agent = load_agent(closed_checkpoint);
  const Agent open_agent = load_agent(open_checkpoint);
  const RunLayout layout = RunLayout::create(config);
  const auto systems = select(config.systems);
  std::vector<GapRow> rows;
  for (double gamma : config.gap.gammas) {
    RunConfig rc = config;
    rc.mode = DynamicsMode::kOpen;
    rc.gamma = gamma;
    const EnvConfig env = rc.env_config();
    for (const auto* model : {"closed", "open"}) {
      const Agent& agent = std::string(model) == "closed" ? closed_agent : open_agent;
      const AgentPolicy policy(agent, config.eval.deterministic);
      const auto summary = summarize(evaluate(systems, env, policy, config.eval), config.eval.success_threshold);
      for (const auto& s : summary.systems) {
        rows.push_back({model, gamma, s.system_id, s.mean_fidelity, s.success_rate});
        out << model << "-trained  gamma=" << gamma << "  " << s.system_id << "  mean F " << s.mean_fidelity
            << "  success " << s.success_rate << "%\n";
      }
    }
  }
  const std::string hash = config_hash(config);
  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "model,gamma,system_id,mean_fidelity,success_rate\n";
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    csv << r.model << ',' << r.gamma << ',' << r.system_id << ',' << r.mean_fidelity << ',' << r.success_rate << '\n';
    j.push_back({{"model", r.model},
                 {"gamma", r.gamma},
                 {"system_id", r.system_id},
                 {"mean_fidelity", r.mean_fidelity},
                 {"success_rate", r.success_rate}});
  }
  write_csv(layout.results / "gap.csv", hash, csv.str());
  write_json_file((layout.results / "gap.json").string(), {{"config_hash", hash}, {"rows", j}});
  return rows;
}

Histogram histogram(const std::vector<double>& values, int bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo)) throw std::invalid_argument("histogram: need bins >= 1 and hi > lo");
  Histogram h;
  h.counts.assign(bins, 0);
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + (hi - lo) * b / bins);
  for (double v : values) {
    const int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
    ++h.counts[std::clamp(b, 0, bins - 1)];
  }
  return h;
}

nlohmann::json to_json(const Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

nlohmann::json plot_data(const nlohmann::json& results, int bins) {
  nlohmann::json out = nlohmann::json::object();
  if (results.contains("aggregates")) {
    for (const auto& a : results.at("aggregates")) {
      const auto values = a.at("values").get<std::vector<double>>();
      out["rim"][a.at("kind").get<std::string>()] = {{"samples", values.size()},
                                                     {"histogram", to_json(histogram(values, bins, 0.0, 1.0))}};
    }
    return out;
  }
  if (results.contains("records")) {
    std::vector<double> f, t, n;
    for (const auto& r : results.at("records")) {
      f.push_back(r.at("fidelity").get<double>());
      t.push_back(r.at("effective_T").get<double>());
      n.push_back(r.at("effective_N").get<double>());
    }
    out["samples"] = f.size();
    out["fidelity"] = to_json(histogram(f, bins, 0.0, 1.0));
    out["effective_T"] = to_json(histogram(t, bins, 0.0, 20.0));
    out["effective_N"] = to_json(histogram(n, bins, 0.0, 60.0));
    return out;
  }
  throw std::invalid_argument("export: input is neither an eval-records nor a RIM report file");
}

void cmd_export(const std::string& input, const std::string& output, int bins, std::ostream& out) {
  const nlohmann::json results = read_json_file(input);
  nlohmann::json plot = plot_data(results, bins);
  if (results.contains("config_hash")) plot["config_hash"] = results.at("config_hash");
  write_json_file(output, plot);
  out << "wrote plot data to " << output << '\n';
}

}  // namespace mtqc
