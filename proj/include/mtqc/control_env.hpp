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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mtqc/catalog.hpp"
#include "mtqc/dynamics.hpp"

namespace mtqc {

inline constexpr int kMaxDim = 8;
inline constexpr int kStateSlots = kMaxDim * kMaxDim;
inline constexpr int kDescriptorSize = 6;
inline constexpr int kObservationSize = kStateSlots + kDescriptorSize;
inline constexpr int kMaxControls = 6;
inline constexpr int kActionSize = 2 + kMaxControls;

struct EnvConfig {
  DynamicsMode mode = DynamicsMode::kOpen;
  double gamma = 0.01;
  /// Episodes terminate once the fidelity reaches this value.
  double f_min = 0.95;
  double t_min = 1.0;
  double t_max = 20.0;
  int n_min = 2;
  int n_max = 60;
  double u_max = 1.0;
  /// When set, the corresponding action slot is ignored.
  std::optional<double> fixed_time;
  std::optional<int> fixed_segments;

  static EnvConfig closed();
  static EnvConfig open(double gamma);

  /// Throws std::invalid_argument on out-of-range settings, including
  /// n_max > 3 * t_max.
  void validate() const;
};

/// Density-matrix encoding zero-padded to 64 slots, then the descriptor.
using Observation = std::array<double, kObservationSize>;

/// Raw policy output: slot 0 drives T, slot 1 drives N, slots 2.. the pulse
/// amplitudes. Values outside [-1, 1] are clamped, never rejected.
struct AgentAction {
  std::array<double, kActionSize> raw{};

  AgentAction clamped() const;
};

struct DecodedAction {
  double total_time = 0.0;
  int segments = 0;
  std::vector<double> pulses;
};

/// Affine map from [-1, 1] to T in [t_min, t_max], N in [n_min, n_max]
/// (rounded) and pulses scaled by u_max * amplitude_scale. Only the first
/// `n_controls` pulse slots are used.
DecodedAction decode_action(const AgentAction& action, const EnvConfig& config,
                            double amplitude_scale, std::size_t n_controls);

/// 10 F at t = 0, 100 (F - F_prev) afterwards, +5 when F > 0.9, +20 when
/// F > f_min, and a -0.01 t step penalty.
double shaped_reward(double f_now, double f_prev, int t, double f_min);

/// d populations, then the upper-triangle coherences as (re, im) pairs in
/// row-major order (d^2 reals in total), zero-padded to 64, then the raw
/// descriptor.
Observation encode_observation(const DensityMatrix& rho, const SystemDescriptor& descriptor);

/// Inverse of the state part of encode_observation.
DensityMatrix decode_observation(const Observation& obs, Eigen::Index dim);

struct StepInfo {
  double fidelity = 0.0;
  int step_index = 0;
  double effective_time = 0.0;
};

struct StepOutcome {
  Observation observation{};
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// Episodic state-transfer environment for one catalog system. T and N are
/// decoded from the first action of an episode and held for the rest of it.
/// An instance is single-threaded; independent instances may run in parallel.
class ControlEnv {
 public:
  ControlEnv(CatalogEntry entry, EnvConfig config);

  Observation reset(std::uint64_t seed = 0);
  /// Throws std::logic_error when the episode is already finished.
  StepOutcome step(const AgentAction& action);

  const CatalogEntry& entry() const { return entry_; }
  const EnvConfig& config() const { return config_; }
  bool done() const { return done_; }
  int steps_taken() const { return steps_; }
  /// Latched T and N; zero before the first step.
  double total_time() const { return total_time_; }
  int segments() const { return segments_; }
  double current_fidelity() const { return fidelity_; }
  const DensityMatrix& state() const { return rho_; }
  std::uint64_t seed() const { return seed_; }

  /// Pulses applied so far as a schedule of steps_taken() segments lasting
  /// steps_taken() * dt in total.
  PulseSchedule applied_schedule() const;

 private:
  CatalogEntry entry_;
  EnvConfig config_;
  SegmentGenerator generator_;
  DensityMatrix rho_;
  CVector psi_;
  std::vector<double> applied_;
  std::uint64_t seed_ = 0;
  double total_time_ = 0.0;
  int segments_ = 0;
  int steps_ = 0;
  double fidelity_ = 0.0;
  bool done_ = true;
};

}  // namespace mtqc
