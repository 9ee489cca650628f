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

#include "mtqc/grape.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mtqc/parallel.hpp"
#include "mtqc/seeding.hpp"

namespace mtqc {

void GrapeConfig::validate() const {
  if (max_iters < 0) throw std::invalid_argument("grape: max_iters must be >= 0");
  if (!(step_size > 0.0) || !(max_step >= step_size)) throw std::invalid_argument("grape: bad step size");
  if (!(tol > 0.0)) throw std::invalid_argument("grape: tol must be positive");
  if (!(fd_step > 0.0)) throw std::invalid_argument("grape: fd_step must be positive");
  if (restarts < 1) throw std::invalid_argument("grape: restarts must be >= 1");
  if (!(init_fraction >= 0.0 && init_fraction <= 1.0)) throw std::invalid_argument("grape: bad init_fraction");
  if (!(u_max > 0.0)) throw std::invalid_argument("grape: u_max must be positive");
  if (!(armijo >= 0.0 && armijo < 1.0)) throw std::invalid_argument("grape: armijo must lie in [0, 1)");
  if (max_backtracks < 1 || workers < 1) throw std::invalid_argument("grape: bad backtrack/worker count");
}

namespace {

std::vector<LindbladChannel> channels_for(const CatalogEntry& entry, DynamicsMode mode, double gamma) {
  if (mode == DynamicsMode::kClosed) return {};
  return amplitude_damping_channels(entry.n_qubits, gamma);
}

}  // namespace

TransferObjective::TransferObjective(const CatalogEntry& entry, DynamicsMode mode, double gamma)
    : entry_(entry), gen_(entry.ham, channels_for(entry, mode, gamma), mode) {
  if (mode == DynamicsMode::kClosed) {
    target_ = entry.target;
  } else {
    target_ = qla::vec(entry.target * entry.target.adjoint());
  }
}

CVector TransferObjective::initial_state() const {
  if (gen_.mode() == DynamicsMode::kClosed) return entry_.initial;
  return qla::vec(entry_.initial * entry_.initial.adjoint());
}

double TransferObjective::readout(const CVector& x) const {
  if (gen_.mode() == DynamicsMode::kClosed) return std::norm(target_.dot(x));
  return target_.dot(x).real();
}

double TransferObjective::value(const PulseSchedule& schedule) const {
  schedule.validate(gen_.n_controls());
  CVector x = initial_state();
  for (int k = 0; k < schedule.segments(); ++k) x = gen_.propagator(schedule.segment(k), schedule.dt()) * x;
  return readout(x);
}

AmplitudeMatrix TransferObjective::gradient(const PulseSchedule& schedule, double* value) const {
  schedule.validate(gen_.n_controls());
  const int n = schedule.segments();
  const auto m = static_cast<int>(gen_.n_controls());
  const double dt = schedule.dt();

  std::vector<CMatrix> props(n);
  std::vector<CVector> states(n + 1);
  states[0] = initial_state();
  for (int k = 0; k < n; ++k) {
    props[k] = gen_.propagator(schedule.segment(k), dt);
    states[k + 1] = props[k] * states[k];
  }
  const bool closed = gen_.mode() == DynamicsMode::kClosed;
  const qla::Complex overlap = target_.dot(states[n]);
  if (value) *value = closed ? std::norm(overlap) : overlap.real();

  AmplitudeMatrix grad(n, m);
  const Eigen::Index s = gen_.dim() * (closed ? 1 : gen_.dim());
  CMatrix aug = CMatrix::Zero(2 * s, 2 * s);
  CVector lambda = target_;  // (P_N ... P_{k+1})^dag t
  for (int k = n - 1; k >= 0; --k) {
    const CMatrix a = gen_.generator(schedule.segment(k)) * dt;
    aug.topLeftCorner(s, s) = a;
    aug.bottomRightCorner(s, s) = a;
    for (int j = 0; j < m; ++j) {
      aug.topRightCorner(s, s) = gen_.control_generator(j) * dt;
      const CMatrix e = qla::matexp(aug);
      // Upper-right block of exp(aug) is dP_k / du_{k,j}.
      const qla::Complex d = lambda.dot(e.topRightCorner(s, s) * states[k]);
      grad(k, j) = closed ? 2.0 * (std::conj(overlap) * d).real() : d.real();
    }
    lambda = props[k].adjoint() * lambda;
  }
  return grad;
}

AmplitudeMatrix TransferObjective::finite_difference_gradient(const PulseSchedule& schedule, double h) const {
  AmplitudeMatrix grad(schedule.segments(), schedule.n_controls());
  PulseSchedule probe = schedule;
  for (int k = 0; k < schedule.segments(); ++k) {
    for (int j = 0; j < schedule.n_controls(); ++j) {
      const double u = schedule.amplitudes(k, j);
      probe.amplitudes(k, j) = u + h;
      const double up = value(probe);
      probe.amplitudes(k, j) = u - h;
      const double down = value(probe);
      probe.amplitudes(k, j) = u;
      grad(k, j) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

AmplitudeMatrix fidelity_gradient(const CatalogEntry& entry, const PulseSchedule& schedule,
                                  DynamicsMode mode, double gamma) {
  return TransferObjective(entry, mode, gamma).gradient(schedule);
}

double transfer_fidelity(const CatalogEntry& entry, const PulseSchedule& schedule, DynamicsMode mode,
                         double gamma) {
  if (mode == DynamicsMode::kClosed) {
    const auto states = propagate_closed(entry.ham, schedule, entry.initial);
    return fidelity(states.empty() ? entry.initial : states.back(), entry.target);
  }
  const auto channels = amplitude_damping_channels(entry.n_qubits, gamma);
  const DensityMatrix rho0 = DensityMatrix::pure(entry.initial);
  const auto states = propagate_open(entry.ham, channels, schedule, rho0);
  return fidelity(states.empty() ? rho0 : states.back(), entry.target);
}

namespace {

GrapeResult ascend(const TransferObjective& objective, PulseSchedule schedule, double bound,
                   const GrapeConfig& config) {
  GrapeResult r;
  double f = objective.value(schedule);
  r.trace.push_back(f);
  double step = config.step_size;
  for (int it = 0; it < config.max_iters; ++it) {
    const AmplitudeMatrix g = config.gradient == GradientMode::kAdjoint
                                  ? objective.gradient(schedule)
                                  : objective.finite_difference_gradient(schedule, config.fd_step);
    bool accepted = false;
    PulseSchedule trial = schedule;
    double f_trial = f;
    double s = step;
    for (int bt = 0; bt < config.max_backtracks; ++bt, s *= 0.5) {
      trial.amplitudes = (schedule.amplitudes + s * g).cwiseMax(-bound).cwiseMin(bound);
      f_trial = objective.value(trial);
      const double predicted = (g.array() * (trial.amplitudes - schedule.amplitudes).array()).sum();
      if (f_trial >= f + config.armijo * predicted && f_trial >= f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      r.converged = true;
      break;
    }
    const double gain = f_trial - f;
    schedule = std::move(trial);
    f = f_trial;
    r.trace.push_back(f);
    step = std::min(2.0 * s, config.max_step);
    if (gain < config.tol) {
      r.converged = true;
      break;
    }
  }
  r.schedule = std::move(schedule);
  return r;
}

}  // namespace

GrapeResult grape_optimize(const CatalogEntry& entry, double total_time, int segments, DynamicsMode mode,
                           double gamma, const GrapeConfig& config, std::uint64_t seed) {
  config.validate();
  if (!(total_time > 0.0) || segments < 1) throw std::invalid_argument("grape: T and N must be positive");
  const TransferObjective objective(entry, mode, gamma);
  const double bound = config.u_max * entry.amplitude_scale;
  const auto m = static_cast<Eigen::Index>(entry.n_controls());

  std::vector<GrapeResult> runs(config.restarts);
  parallel_for(runs.size(), config.workers, [&](std::size_t restart) {
    std::mt19937_64 rng(derive_seed(seed, {restart}));
    std::uniform_real_distribution<double> init(-config.init_fraction * bound, config.init_fraction * bound);
    PulseSchedule start{total_time, AmplitudeMatrix(segments, m)};
    for (Eigen::Index k = 0; k < start.amplitudes.size(); ++k) start.amplitudes.data()[k] = init(rng);
    runs[restart] = ascend(objective, std::move(start), bound, config);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].trace.back() > runs[best].trace.back()) best = r;
  }
  GrapeResult out = std::move(runs[best]);
  out.best_restart = static_cast<int>(best);
  out.fidelity = transfer_fidelity(entry, out.schedule, mode, gamma);
  return out;
}

}  // namespace mtqc
