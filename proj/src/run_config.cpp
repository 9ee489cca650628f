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

#include "mtqc/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "mtqc/seeding.hpp"

namespace mtqc {

namespace {

// Reads the keys of one JSON object and rejects whatever is left over.
class Section {
 public:
  Section(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where(key) + ": wrong type");
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    used_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    T v;
    get(key, v);
    out = v;
  }

  Section child(const char* key) {
    used_.insert(key);
    static const nlohmann::json kEmpty = nlohmann::json::object();
    return Section(j_.contains(key) ? j_.at(key) : kEmpty, where(key));
  }

  bool has(const char* key) const { return j_.contains(key); }
  std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) throw ConfigError("unknown config key '" + where(k.c_str()) + "'");
    }
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> used_;
};

nlohmann::json opt(const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

EnvConfig RunConfig::env_config() const {
  EnvConfig c = mode == DynamicsMode::kClosed ? EnvConfig::closed() : EnvConfig::open(gamma);
  c.gamma = mode == DynamicsMode::kClosed ? 0.0 : gamma;
  if (env.f_min) c.f_min = *env.f_min;
  c.t_min = env.t_min;
  c.t_max = env.t_max;
  c.n_min = env.n_min;
  c.n_max = env.n_max;
  c.u_max = env.u_max;
  c.fixed_time = env.fixed_time;
  c.fixed_segments = env.fixed_segments;
  return c;
}

TrainConfig RunConfig::train_config(std::uint64_t catalog_hash) const {
  TrainConfig t;
  t.env = env_config();
  t.sac = sac;
  t.total_steps = train.total_steps;
  t.warmup_steps = train.warmup_steps;
  t.seed = seed;
  t.checkpoint_every = train.checkpoint_every;
  t.catalog_hash = catalog_hash;
  return t;
}

std::vector<PerturbationModel> RunConfig::perturbation_models() const {
  std::vector<PerturbationModel> out;
  for (auto kind : rim.kinds) {
    PerturbationModel m;
    m.kind = kind;
    m.delta_u = rim.delta_u;
    m.delta_gamma = rim.delta_gamma;
    m.nominal_gamma = rim.nominal_gamma;
    m.samples = rim.samples;
    m.per_segment = rim.per_segment;
    out.push_back(m);
  }
  return out;
}

void RunConfig::validate() const {
  try {
    if (name.empty() || name.find('/') != std::string::npos) throw std::invalid_argument("name must be a plain directory name");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    env_config().validate();
    sac.validate();
    eval.validate();
    grape.optimizer.validate();
    if (train.total_steps == 0) throw std::invalid_argument("train.total_steps must be positive");
    for (const auto& m : perturbation_models()) m.validate();
    if (rim.kinds.empty()) throw std::invalid_argument("rim.kinds must not be empty");
    if (expand.stages.empty()) throw std::invalid_argument("expand.stages must not be empty");
    for (std::size_t i = 0; i < expand.stages.size(); ++i) {
      if (expand.stages[i] < 1 || (i > 0 && expand.stages[i] <= expand.stages[i - 1])) {
        throw std::invalid_argument("expand.stages must be positive and increasing");
      }
    }
    for (double g : gap.gammas) {
      if (!(g >= 0.0)) throw std::invalid_argument("gap.gammas must be non-negative");
    }
    if (grape.total_time && !(*grape.total_time > 0.0)) throw std::invalid_argument("grape.T must be positive");
    if (grape.segments && *grape.segments < 1) throw std::invalid_argument("grape.N must be >= 1");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  Section root(j, "");
  root.get("name", c.name);
  root.get("runs_dir", c.runs_dir);
  if (root.has("systems") && j.at("systems").is_array()) {
    std::vector<std::string> ids;
    root.get("systems", ids);
    c.systems.clear();
    for (std::size_t i = 0; i < ids.size(); ++i) c.systems += (i ? "," : "") + ids[i];
  } else {
    root.get("systems", c.systems);
  }
  std::string mode = to_string(c.mode);
  root.get("mode", mode);
  try {
    c.mode = parse_dynamics_mode(mode);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("mode: ") + e.what());
  }
  root.get("gamma", c.gamma);
  root.get("seed", c.seed);
  root.get("workers", c.workers);

  Section env = root.child("env");
  env.get("f_min", c.env.f_min);
  env.get("t_min", c.env.t_min);
  env.get("t_max", c.env.t_max);
  env.get("n_min", c.env.n_min);
  env.get("n_max", c.env.n_max);
  env.get("u_max", c.env.u_max);
  env.get("fixed_T", c.env.fixed_time);
  env.get("fixed_N", c.env.fixed_segments);
  env.finish();

  Section train = root.child("train");
  train.get("total_steps", c.train.total_steps);
  train.get("warmup_steps", c.train.warmup_steps);
  train.get("checkpoint_every", c.train.checkpoint_every);
  train.finish();

  Section sac = root.child("sac");
  sac.get("hidden", c.sac.hidden);
  sac.get("lr", c.sac.lr);
  sac.get("discount", c.sac.discount);
  sac.get("tau", c.sac.tau);
  sac.get("batch_size", c.sac.batch_size);
  sac.get("buffer_capacity", c.sac.buffer_capacity);
  sac.get("target_entropy", c.sac.target_entropy);
  sac.get("initial_log_alpha", c.sac.initial_log_alpha);
  sac.get("fixed_alpha", c.sac.fixed_alpha);
  sac.finish();

  Section eval = root.child("eval");
  eval.get("experiments", c.eval.experiments);
  eval.get("trials", c.eval.trials);
  eval.get("success_threshold", c.eval.success_threshold);
  eval.get("deterministic", c.eval.deterministic);
  eval.get("seed", c.eval.seed);
  eval.finish();

  Section grape = root.child("grape");
  GrapeConfig& g = c.grape.optimizer;
  grape.get("max_iters", g.max_iters);
  grape.get("step_size", g.step_size);
  grape.get("tol", g.tol);
  grape.get("restarts", g.restarts);
  grape.get("init_fraction", g.init_fraction);
  grape.get("T", c.grape.total_time);
  grape.get("N", c.grape.segments);
  std::string gradient = g.gradient == GradientMode::kAdjoint ? "adjoint" : "finite-difference";
  grape.get("gradient", gradient);
  if (gradient == "adjoint") {
    g.gradient = GradientMode::kAdjoint;
  } else if (gradient == "finite-difference") {
    g.gradient = GradientMode::kFiniteDifference;
  } else {
    throw ConfigError("grape.gradient: expected 'adjoint' or 'finite-difference'");
  }
  grape.finish();

  Section rim = root.child("rim");
  rim.get("delta_u", c.rim.delta_u);
  rim.get("delta_gamma", c.rim.delta_gamma);
  rim.get("nominal_gamma", c.rim.nominal_gamma);
  rim.get("samples", c.rim.samples);
  rim.get("per_segment", c.rim.per_segment);
  rim.get("nominal_threshold", c.rim.nominal_threshold);
  if (rim.has("kinds")) {
    std::vector<std::string> kinds;
    rim.get("kinds", kinds);
    c.rim.kinds.clear();
    try {
      for (const auto& k : kinds) c.rim.kinds.push_back(parse_perturbation_kind(k));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("rim.kinds: ") + e.what());
    }
  }
  rim.finish();

  Section expand = root.child("expand");
  expand.get("stages", c.expand.stages);
  expand.get("solved_fraction", c.expand.solved_fraction);
  expand.finish();

  Section gap = root.child("gap");
  gap.get("gammas", c.gap.gammas);
  gap.finish();

  root.finish();
  c.eval.workers = c.workers;
  c.grape.optimizer.workers = c.workers;
  c.validate();
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json kinds = nlohmann::json::array();
  for (auto k : c.rim.kinds) kinds.push_back(to_string(k));
  return {
      {"name", c.name},
      {"runs_dir", c.runs_dir},
      {"systems", c.systems},
      {"mode", to_string(c.mode)},
      {"gamma", c.gamma},
      {"seed", c.seed},
      {"workers", c.workers},
      {"env",
       {{"f_min", opt(c.env.f_min)},
        {"t_min", c.env.t_min},
        {"t_max", c.env.t_max},
        {"n_min", c.env.n_min},
        {"n_max", c.env.n_max},
        {"u_max", c.env.u_max},
        {"fixed_T", opt(c.env.fixed_time)},
        {"fixed_N", opt(c.env.fixed_segments)}}},
      {"train",
       {{"total_steps", c.train.total_steps},
        {"warmup_steps", c.train.warmup_steps},
        {"checkpoint_every", c.train.checkpoint_every}}},
      {"sac",
       {{"hidden", c.sac.hidden},
        {"lr", c.sac.lr},
        {"discount", c.sac.discount},
        {"tau", c.sac.tau},
        {"batch_size", c.sac.batch_size},
        {"buffer_capacity", c.sac.buffer_capacity},
        {"target_entropy", opt(c.sac.target_entropy)},
        {"initial_log_alpha", c.sac.initial_log_alpha},
        {"fixed_alpha", opt(c.sac.fixed_alpha)}}},
      {"eval",
       {{"experiments", c.eval.experiments},
        {"trials", c.eval.trials},
        {"success_threshold", c.eval.success_threshold},
        {"deterministic", c.eval.deterministic},
        {"seed", c.eval.seed}}},
      {"grape",
       {{"max_iters", c.grape.optimizer.max_iters},
        {"step_size", c.grape.optimizer.step_size},
        {"tol", c.grape.optimizer.tol},
        {"restarts", c.grape.optimizer.restarts},
        {"init_fraction", c.grape.optimizer.init_fraction},
        {"gradient", c.grape.optimizer.gradient == GradientMode::kAdjoint ? "adjoint" : "finite-difference"},
        {"T", opt(c.grape.total_time)},
        {"N", opt(c.grape.segments)}}},
      {"rim",
       {{"delta_u", c.rim.delta_u},
        {"delta_gamma", c.rim.delta_gamma},
        {"nominal_gamma", c.rim.nominal_gamma},
        {"samples", c.rim.samples},
        {"per_segment", c.rim.per_segment},
        {"kinds", kinds},
        {"nominal_threshold", c.rim.nominal_threshold}}},
      {"expand", {{"stages", c.expand.stages}, {"solved_fraction", c.expand.solved_fraction}}},
      {"gap", {{"gammas", c.gap.gammas}}},
  };
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return run_config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
  // Worker count never changes results, so it stays out of the hash.
  nlohmann::json j = to_json(c);
  j.erase("workers");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash_string(j.dump())));
  return buf;
}

}  // namespace mtqc
