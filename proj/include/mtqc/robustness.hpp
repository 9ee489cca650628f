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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mtqc/catalog.hpp"
#include "mtqc/dynamics.hpp"
#include "mtqc/evaluation.hpp"

namespace mtqc {

enum class PerturbationKind { kPulse, kDecoherence, kCombined };

const char* to_string(PerturbationKind kind);
PerturbationKind parse_perturbation_kind(std::string_view text);

struct PerturbationModel {
  PerturbationKind kind = PerturbationKind::kCombined;
  double delta_u = 0.05;
  double delta_gamma = 0.005;
  double nominal_gamma = 0.01;
  int samples = 15;
  /// Draw a fresh offset for every segment instead of one per channel.
  /// Sensitivity studies only.
  bool per_segment = false;

  void validate() const;
};

/// Adds eps_j ~ U(-delta_u, delta_u) to every segment of channel j. The
/// result is not clamped back into the amplitude box.
PulseSchedule perturb_pulses(const PulseSchedule& schedule, double delta_u, std::mt19937_64& rng,
                             bool per_segment = false);

/// Adds offsets[j] to every segment of channel j.
PulseSchedule shift_pulses(const PulseSchedule& schedule, std::span<const double> offsets);

/// nominal + U(0, delta_gamma).
double perturb_gamma(double nominal, double delta_gamma, std::mt19937_64& rng);

/// Mean infidelity.
double rim_from_fidelities(std::span<const double> fidelities);

struct RimResult {
  double rim = 0.0;
  std::vector<double> fidelities;
};

/// Re-simulates the open dynamics `model.samples` times under perturbed
/// pulses and/or damping rate. Sample s draws from
/// derive_seed(seed, {s}).
RimResult rim(const CatalogEntry& entry, const PulseSchedule& schedule, const PerturbationModel& model,
              std::uint64_t seed);

/// One nominal pulse sequence to be stress-tested.
struct PulseRecord {
  std::string system_id;
  int experiment = 0;
  PulseSchedule schedule;
};

struct RimRow {
  std::string system_id;
  PerturbationKind kind = PerturbationKind::kCombined;
  /// Pulse records kept after the nominal-fidelity filter.
  int experiments = 0;
  double nominal_fidelity = 0.0;  // mean over kept records
  double rim = 0.0;               // mean over kept records
  std::vector<double> per_experiment;
};

struct RimAggregate {
  PerturbationKind kind = PerturbationKind::kCombined;
  int count = 0;  // pulse records
  Stats rim;
  std::vector<double> values;
};

struct RimReport {
  std::vector<RimRow> rows;  // kept systems x kinds
  std::vector<RimAggregate> aggregates;
  std::vector<std::string> excluded;  // systems with no record above threshold
  int dropped_records = 0;
};

struct RimCampaignConfig {
  std::vector<PerturbationModel> models;
  double nominal_threshold = 0.95;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Nominal open-system fidelity of each record at the models' nominal
/// rate decides inclusion; every kept record is scored under every model.
/// Sample streams derive from (seed, system, experiment, kind, sample), so
/// the report does not depend on `workers`.
RimReport rim_campaign(const std::vector<CatalogEntry>& catalog, const std::vector<PulseRecord>& pulses,
                       const RimCampaignConfig& config);

nlohmann::json to_json(const RimReport& report);
/// One line per system x kind.
std::string rim_rows_csv(const RimReport& report);

}  // namespace mtqc
