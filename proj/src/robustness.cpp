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

#include "mtqc/robustness.hpp"

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mtqc/grape.hpp"
#include "mtqc/parallel.hpp"
#include "mtqc/seeding.hpp"

namespace mtqc {

const char* to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kPulse:
      return "pulse";
    case PerturbationKind::kDecoherence:
      return "decoherence";
    case PerturbationKind::kCombined:
      return "combined";
  }
  return "?";
}

PerturbationKind parse_perturbation_kind(std::string_view text) {
  if (text == "pulse") return PerturbationKind::kPulse;
  if (text == "decoherence") return PerturbationKind::kDecoherence;
  if (text == "combined") return PerturbationKind::kCombined;
  throw std::invalid_argument("unknown perturbation kind '" + std::string(text) + "'");
}

void PerturbationModel::validate() const {
  if (!(delta_u >= 0.0) || !(delta_gamma >= 0.0) || !(nominal_gamma >= 0.0)) {
    throw std::invalid_argument("perturbation: magnitudes must be non-negative");
  }
  if (samples < 1) throw std::invalid_argument("perturbation: samples must be >= 1");
}

PulseSchedule perturb_pulses(const PulseSchedule& schedule, double delta_u, std::mt19937_64& rng,
                             bool per_segment) {
  if (!(delta_u >= 0.0)) throw std::invalid_argument("perturb_pulses: delta_u must be >= 0");
  PulseSchedule out = schedule;
  if (delta_u == 0.0) return out;
  std::uniform_real_distribution<double> eps(-delta_u, delta_u);
  if (per_segment) {
    for (Eigen::Index k = 0; k < out.amplitudes.rows(); ++k) {
      for (Eigen::Index j = 0; j < out.amplitudes.cols(); ++j) out.amplitudes(k, j) += eps(rng);
    }
    return out;
  }
  std::vector<double> offsets(out.amplitudes.cols());
  for (auto& e : offsets) e = eps(rng);
  return shift_pulses(schedule, offsets);
}

PulseSchedule shift_pulses(const PulseSchedule& schedule, std::span<const double> offsets) {
  if (offsets.size() != static_cast<std::size_t>(schedule.n_controls())) {
    throw std::invalid_argument("shift_pulses: one offset per channel required");
  }
  PulseSchedule out = schedule;
  for (Eigen::Index j = 0; j < out.amplitudes.cols(); ++j) out.amplitudes.col(j).array() += offsets[j];
  return out;
}

double perturb_gamma(double nominal, double delta_gamma, std::mt19937_64& rng) {
  if (!(nominal >= 0.0) || !(delta_gamma >= 0.0)) {
    throw std::invalid_argument("perturb_gamma: rates must be non-negative");
  }
  if (delta_gamma == 0.0) return nominal;
  return nominal + std::uniform_real_distribution<double>(0.0, delta_gamma)(rng);
}

double rim_from_fidelities(std::span<const double> fidelities) {
  if (fidelities.empty()) throw std::invalid_argument("rim: no samples");
  double sum = 0.0;
  for (double f : fidelities) sum += 1.0 - f;
  return sum / static_cast<double>(fidelities.size());
}

RimResult rim(const CatalogEntry& entry, const PulseSchedule& schedule, const PerturbationModel& model,
              std::uint64_t seed) {
  model.validate();
  const bool pulses = model.kind != PerturbationKind::kDecoherence;
  const bool rates = model.kind != PerturbationKind::kPulse;
  RimResult r;
  r.fidelities.reserve(model.samples);
  for (int s = 0; s < model.samples; ++s) {
    std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(s)}));
    const PulseSchedule p = pulses ? perturb_pulses(schedule, model.delta_u, rng, model.per_segment) : schedule;
    const double g = rates ? perturb_gamma(model.nominal_gamma, model.delta_gamma, rng) : model.nominal_gamma;
    r.fidelities.push_back(transfer_fidelity(entry, p, DynamicsMode::kOpen, g));
  }
  r.rim = rim_from_fidelities(r.fidelities);
  return r;
}

RimReport rim_campaign(const std::vector<CatalogEntry>& catalog, const std::vector<PulseRecord>& pulses,
                       const RimCampaignConfig& config) {
  if (config.models.empty()) throw std::invalid_argument("rim_campaign: no perturbation models");
  for (const auto& m : config.models) m.validate();
  const double nominal_gamma = config.models.front().nominal_gamma;

  // Nominal filter.
  std::vector<double> nominal(pulses.size());
  parallel_for(pulses.size(), config.workers, [&](std::size_t i) {
    const CatalogEntry& e = find_entry(catalog, pulses[i].system_id);
    nominal[i] = transfer_fidelity(e, pulses[i].schedule, DynamicsMode::kOpen, nominal_gamma);
  });
  std::vector<std::size_t> kept;
  std::vector<std::string> order;
  std::set<std::string> seen;
  std::set<std::string> has_kept;
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    if (seen.insert(pulses[i].system_id).second) order.push_back(pulses[i].system_id);
    if (nominal[i] >= config.nominal_threshold) {
      kept.push_back(i);
      has_kept.insert(pulses[i].system_id);
    }
  }

  const std::size_t n_models = config.models.size();
  std::vector<double> scores(kept.size() * n_models);
  parallel_for(scores.size(), config.workers, [&](std::size_t task) {
    const PulseRecord& p = pulses[kept[task / n_models]];
    const PerturbationModel& model = config.models[task % n_models];
    const std::uint64_t seed =
        derive_seed(config.seed, {hash_string(p.system_id), static_cast<std::uint64_t>(p.experiment),
                                  static_cast<std::uint64_t>(model.kind)});
    scores[task] = rim(find_entry(catalog, p.system_id), p.schedule, model, seed).rim;
  });

  RimReport report;
  report.dropped_records = static_cast<int>(pulses.size() - kept.size());
  for (const auto& id : order) {
    if (!has_kept.count(id)) report.excluded.push_back(id);
  }
  for (std::size_t m = 0; m < n_models; ++m) {
    RimAggregate agg;
    agg.kind = config.models[m].kind;
    for (const auto& id : order) {
      if (!has_kept.count(id)) continue;
      RimRow row;
      row.system_id = id;
      row.kind = agg.kind;
      double nominal_sum = 0.0;
      for (std::size_t k = 0; k < kept.size(); ++k) {
        if (pulses[kept[k]].system_id != id) continue;
        row.per_experiment.push_back(scores[k * n_models + m]);
        nominal_sum += nominal[kept[k]];
      }
      row.experiments = static_cast<int>(row.per_experiment.size());
      row.nominal_fidelity = nominal_sum / row.experiments;
      row.rim = describe(row.per_experiment).mean;
      agg.values.insert(agg.values.end(), row.per_experiment.begin(), row.per_experiment.end());
      report.rows.push_back(std::move(row));
    }
    agg.count = static_cast<int>(agg.values.size());
    agg.rim = describe(agg.values);
    report.aggregates.push_back(std::move(agg));
  }
  return report;
}

nlohmann::json to_json(const RimReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"system_id", r.system_id},
                    {"kind", to_string(r.kind)},
                    {"experiments", r.experiments},
                    {"nominal_fidelity", r.nominal_fidelity},
                    {"rim", r.rim},
                    {"per_experiment", r.per_experiment}});
  }
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& a : report.aggregates) {
    aggs.push_back({{"kind", to_string(a.kind)}, {"count", a.count}, {"rim", to_json(a.rim)}, {"values", a.values}});
  }
  return {{"rows", rows},
          {"aggregates", aggs},
          {"excluded", report.excluded},
          {"dropped_records", report.dropped_records}};
}

std::string rim_rows_csv(const RimReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "system_id,kind,experiments,nominal_fidelity,rim\n";
  for (const auto& r : report.rows) {
    os << r.system_id << ',' << to_string(r.kind) << ',' << r.experiments << ',' << r.nominal_fidelity << ','
       << r.rim << '\n';
  }
  return os.str();
}

}  // namespace mtqc
