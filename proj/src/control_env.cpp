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

#include "mtqc/control_env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtqc {

EnvConfig EnvConfig::closed() {
  EnvConfig c;
  c.mode = DynamicsMode::kClosed;
  c.gamma = 0.0;
  c.f_min = 0.999;
  return c;
}

EnvConfig EnvConfig::open(double gamma) {
  EnvConfig c;
  c.mode = DynamicsMode::kOpen;
  c.gamma = gamma;
  c.f_min = 0.95;
  return c;
}

void EnvConfig::validate() const {
  if (gamma < 0.0) throw std::invalid_argument("env: gamma must be non-negative");
  if (!(f_min > 0.0 && f_min <= 1.0)) throw std::invalid_argument("env: f_min must lie in (0, 1]");
  if (!(t_min > 0.0 && t_max >= t_min)) throw std::invalid_argument("env: bad time range");
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("env: bad segment range");
  if (n_max > 3.0 * t_max) throw std::invalid_argument("env: n_max must not exceed 3 * t_max");
  if (!(u_max > 0.0)) throw std::invalid_argument("env: u_max must be positive");
  if (fixed_time && !(*fixed_time > 0.0)) throw std::invalid_argument("env: fixed T must be positive");
  if (fixed_segments && *fixed_segments < 1) throw std::invalid_argument("env: fixed N must be >= 1");
}

AgentAction AgentAction::clamped() const {
  AgentAction out;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const double v = std::isnan(raw[k]) ? 0.0 : raw[k];
    out.raw[k] = std::clamp(v, -1.0, 1.0);
  }
  return out;
}

DecodedAction decode_action(const AgentAction& action, const EnvConfig& config,
                            double amplitude_scale, std::size_t n_controls) {
  if (n_controls > static_cast<std::size_t>(kMaxControls)) {
    throw std::invalid_argument("decode_action: too many control channels");
  }
  const AgentAction a = action.clamped();
  DecodedAction out;
  const double unit_t = (a.raw[0] + 1.0) / 2.0;
  const double unit_n = (a.raw[1] + 1.0) / 2.0;
  out.total_time = config.fixed_time.value_or(config.t_min + unit_t * (config.t_max - config.t_min));
  if (config.fixed_segments) {
    out.segments = *config.fixed_segments;
  } else {
    const double n = std::round(config.n_min + unit_n * (config.n_max - config.n_min));
    out.segments = std::clamp(static_cast<int>(n), config.n_min, config.n_max);
  }
  out.pulses.resize(n_controls);
  for (std::size_t j = 0; j < n_controls; ++j) {
    out.pulses[j] = a.raw[2 + j] * config.u_max * amplitude_scale;
  }
  return out;
}

double shaped_reward(double f_now, double f_prev, int t, double f_min) {
  double r = t == 0 ? 10.0 * f_now : 100.0 * (f_now - f_prev);
  if (f_now > 0.9) r += 5.0;
  if (f_now > f_min) r += 20.0;
  return r - 0.01 * t;
}

Observation encode_observation(const DensityMatrix& rho, const SystemDescriptor& descriptor) {
  const Eigen::Index d = rho.dim();
  if (d > kMaxDim) throw std::invalid_argument("encode_observation: dimension above 8");
  Observation obs{};
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < d; ++i) obs[k++] = rho.matrix(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      obs[k++] = rho.matrix(i, j).real();
      obs[k++] = rho.matrix(i, j).imag();
    }
  }
  const auto c = descriptor.as_array();
  std::copy(c.begin(), c.end(), obs.begin() + kStateSlots);
  return obs;
}

DensityMatrix decode_observation(const Observation& obs, Eigen::Index dim) {
  if (dim > kMaxDim) throw std::invalid_argument("decode_observation: dimension above 8");
  CMatrix m = CMatrix::Zero(dim, dim);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) m(i, i) = obs[k++];
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      m(i, j) = qla::Complex(obs[k], obs[k + 1]);
      m(j, i) = std::conj(m(i, j));
      k += 2;
    }
  }
  return {m};
}

ControlEnv::ControlEnv(CatalogEntry entry, EnvConfig config)
    : entry_(std::move(entry)),
      config_(config),
      generator_(entry_.ham,
                 config.mode == DynamicsMode::kOpen
                     ? amplitude_damping_channels(entry_.n_qubits, config.gamma)
                     : std::vector<LindbladChannel>{},
                 config.mode) {
  config_.validate();
  if (entry_.n_controls() > static_cast<std::size_t>(kMaxControls)) {
    throw std::invalid_argument("ControlEnv: system has more than 6 controls");
  }
}

Observation ControlEnv::reset(std::uint64_t seed) {
  seed_ = seed;
  psi_ = entry_.initial;
  rho_ = DensityMatrix::pure(psi_);
  applied_.clear();
  total_time_ = 0.0;
  segments_ = 0;
  steps_ = 0;
  fidelity_ = fidelity(rho_, entry_.target);
  done_ = false;
  return encode_observation(rho_, entry_.descriptor);
}

StepOutcome ControlEnv::step(const AgentAction& action) {
  if (done_) throw std::logic_error("ControlEnv::step called on a finished episode");
  const DecodedAction decoded =
      decode_action(action, config_, entry_.amplitude_scale, entry_.n_controls());
  if (steps_ == 0) {
    total_time_ = decoded.total_time;
    segments_ = decoded.segments;
  }
  const double dt = total_time_ / segments_;
  const CMatrix prop = generator_.propagator(decoded.pulses, dt);
  if (config_.mode == DynamicsMode::kClosed) {
    psi_ = prop * psi_;
    rho_ = DensityMatrix::pure(psi_);
  } else {
    const CVector r = prop * qla::vec(rho_.matrix);
    rho_.matrix = qla::unvec(r, entry_.dim());
  }
  applied_.insert(applied_.end(), decoded.pulses.begin(), decoded.pulses.end());

  const double f_prev = fidelity_;
  fidelity_ = std::clamp(fidelity(rho_, entry_.target), 0.0, 1.0);
  const int t = steps_;
  ++steps_;

  StepOutcome out;
  out.reward = shaped_reward(fidelity_, f_prev, t, config_.f_min);
  done_ = fidelity_ >= config_.f_min || steps_ >= segments_;
  out.done = done_;
  out.observation = encode_observation(rho_, entry_.descriptor);
  out.info = {fidelity_, t, steps_ * dt};
  return out;
}

PulseSchedule ControlEnv::applied_schedule() const {
  if (steps_ == 0) throw std::logic_error("ControlEnv: no pulses applied yet");
  PulseSchedule s;
  s.total_time = steps_ * (total_time_ / segments_);
  s.amplitudes = Eigen::Map<const AmplitudeMatrix>(
      applied_.data(), steps_, static_cast<Eigen::Index>(entry_.n_controls()));
  return s;
}

}  // namespace mtqc
