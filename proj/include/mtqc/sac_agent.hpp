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
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "mtqc/mlp.hpp"
#include "mtqc/replay_buffer.hpp"

namespace mtqc {

struct SacConfig {
  int obs_dim = 70;
  int act_dim = 8;
  std::vector<int> hidden = {64, 256, 512, 256, 64};
  double lr = 3e-4;
  double discount = 0.98;
  double tau = 0.05;
  int batch_size = 64;
  std::size_t buffer_capacity = 500000;
  /// Defaults to -act_dim when unset.
  std::optional<double> target_entropy;
  double initial_log_alpha = 0.0;
  /// When set, alpha is frozen at this value and never learned.
  std::optional<double> fixed_alpha;
  double log_std_min = -20.0;
  double log_std_max = 2.0;

  double resolved_target_entropy() const { return target_entropy.value_or(-act_dim); }
  void validate() const;
};

struct SacLosses {
  double q1 = 0.0;
  double q2 = 0.0;
  double policy = 0.0;
  double alpha = 0.0;
  double alpha_value = 0.0;
  double mean_log_prob = 0.0;
};

/// Multi-task soft actor-critic: tanh-squashed Gaussian policy, twin
/// critics with Polyak-averaged targets, learned entropy temperature.
/// Gradients are back-propagated by hand through the fixed MLP topology.
template <typename Scalar>
class SacAgent {
 public:
  using Net = Mlp<Scalar>;
  using Matrix = typename Net::Matrix;
  using Vector = typename Net::Vector;
  using Batch = TransitionBatch<Scalar>;

  struct Sample {
    std::vector<double> action;
    /// Unset for deterministic calls.
    std::optional<double> log_prob;
  };

  /// Squashed-Gaussian sample for a whole batch given standard-normal
  /// noise (act_dim x batch).
  struct BatchSample {
    Matrix mean;
    Matrix log_std;
    Matrix actions;
    Vector log_prob;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> log_std_clamped;
  };

  SacAgent(SacConfig config, std::uint64_t seed);

  const SacConfig& config() const { return config_; }

  /// tanh(mean + std * eps) with the change-of-variables log-density, or
  /// tanh(mean) when deterministic. Const and thread-safe.
  Sample sample(std::span<const double> obs, bool deterministic, std::mt19937_64& rng) const;

  BatchSample sample_batch(const Matrix& obs, const Matrix& noise,
                           typename Net::Cache* cache = nullptr) const;

  /// One SAC step on a batch: critics, policy, temperature, then targets.
  SacLosses update(const Batch& batch, std::mt19937_64& rng);

  // Loss pieces with explicit noise so they can be checked against finite
  // differences. Gradients are written (not accumulated) when the spans are
  // non-empty.
  double critic_loss(const Batch& batch, const Matrix& next_noise, int which,
                     std::span<Scalar> grad) const;
  Vector critic_targets(const Batch& batch, const Matrix& next_noise) const;
  double policy_loss(const Batch& batch, const Matrix& noise, std::span<Scalar> grad,
                     double* mean_log_prob = nullptr) const;
  /// -log_alpha * mean(log_prob + target_entropy); returns the loss and
  /// writes d loss / d log_alpha.
  double alpha_loss(double mean_log_prob, double* grad_log_alpha) const;

  double alpha() const;
  double log_alpha() const { return log_alpha_; }
  void set_log_alpha(double v) { log_alpha_ = v; }

  Net& policy() { return policy_; }
  const Net& policy() const { return policy_; }
  Net& q1() { return q1_; }
  const Net& q1() const { return q1_; }
  Net& q2() { return q2_; }
  const Net& q2() const { return q2_; }
  Net& q1_target() { return q1_target_; }
  const Net& q1_target() const { return q1_target_; }
  Net& q2_target() { return q2_target_; }
  const Net& q2_target() const { return q2_target_; }

  std::uint64_t updates() const { return updates_; }
  void set_updates(std::uint64_t n) { updates_ = n; }

 private:
  Matrix q_input(const Matrix& obs, const Matrix& actions) const;

  SacConfig config_;
  Net policy_;
  Net q1_;
  Net q2_;
  Net q1_target_;
  Net q2_target_;
  Adam<Scalar> policy_opt_;
  Adam<Scalar> q1_opt_;
  Adam<Scalar> q2_opt_;
  Adam<double> alpha_opt_;
  double log_alpha_ = 0.0;
  std::uint64_t updates_ = 0;
};

extern template class SacAgent<float>;
extern template class SacAgent<double>;

/// Single-precision agent used for training and evaluation.
using Agent = SacAgent<float>;

}  // namespace mtqc
