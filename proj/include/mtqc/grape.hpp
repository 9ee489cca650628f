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
#include <vector>

#include "mtqc/catalog.hpp"
#include "mtqc/dynamics.hpp"

namespace mtqc {

enum class GradientMode { kAdjoint, kFiniteDifference };

struct GrapeConfig {
  int max_iters = 300;
  /// First trial step of the line search; later iterations start from twice
  /// the last accepted step.
  double step_size = 1.0;
  double max_step = 1e3;
  /// Stop once an accepted step gains less than this.
  double tol = 1e-8;
  GradientMode gradient = GradientMode::kAdjoint;
  double fd_step = 1e-6;
  int restarts = 5;
  /// Initial amplitudes are U(-f, f) * bound.
  double init_fraction = 0.1;
  double u_max = 1.0;
  double armijo = 1e-4;
  int max_backtracks = 40;
  int workers = 1;

  void validate() const;
};

struct GrapeResult {
  PulseSchedule schedule;
  /// Fidelity after every accepted iteration, starting with the initial
  /// guess. Nondecreasing.
  std::vector<double> trace;
  bool converged = false;
  int best_restart = 0;
  double fidelity = 0.0;
};

/// Fidelity of the final state of a schedule, with the gradient with respect
/// to every amplitude. Closed mode evolves the state vector; open mode the
/// vectorized density matrix under per-qubit amplitude damping at `gamma`.
/// Segment derivatives come from exp([[A, E], [0, A]] dt), whose upper-right
/// block is the exact derivative of exp(A dt) along E.
class TransferObjective {
 public:
  TransferObjective(const CatalogEntry& entry, DynamicsMode mode, double gamma);

  /// Unclamped <t|rho_N|t>.
  double value(const PulseSchedule& schedule) const;
  AmplitudeMatrix gradient(const PulseSchedule& schedule, double* value = nullptr) const;
  AmplitudeMatrix finite_difference_gradient(const PulseSchedule& schedule, double h) const;

  const CatalogEntry& entry() const { return entry_; }
  DynamicsMode mode() const { return gen_.mode(); }

 private:
  CVector initial_state() const;
  double readout(const CVector& x) const;

  const CatalogEntry& entry_;
  SegmentGenerator gen_;
  CVector target_;  // t (closed) or vec(|t><t|) (open)
};

AmplitudeMatrix fidelity_gradient(const CatalogEntry& entry, const PulseSchedule& schedule,
                                  DynamicsMode mode, double gamma);

/// Final-state fidelity of a schedule under the given dynamics.
double transfer_fidelity(const CatalogEntry& entry, const PulseSchedule& schedule, DynamicsMode mode,
                         double gamma);

/// Projected gradient ascent from small random amplitudes, best of
/// config.restarts seeded restarts. Amplitudes stay in
/// [-u_max * amplitude_scale, u_max * amplitude_scale].
GrapeResult grape_optimize(const CatalogEntry& entry, double total_time, int segments, DynamicsMode mode,
                           double gamma, const GrapeConfig& config, std::uint64_t seed);

}  // namespace mtqc
