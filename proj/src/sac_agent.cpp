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

#include "mtqc/sac_agent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mtqc {

void SacConfig::validate() const {
  if (obs_dim < 1 || act_dim < 1) throw std::invalid_argument("sac: dimensions must be positive");
  if (hidden.empty()) throw std::invalid_argument("sac: at least one hidden layer required");
  if (!(lr > 0.0)) throw std::invalid_argument("sac: learning rate must be positive");
  if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("sac: discount must lie in (0, 1)");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("sac: tau must lie in (0, 1]");
  if (batch_size < 1) throw std::invalid_argument("sac: batch size must be positive");
  if (buffer_capacity < static_cast<std::size_t>(batch_size)) {
    throw std::invalid_argument("sac: buffer smaller than a batch");
  }
  if (fixed_alpha && *fixed_alpha < 0.0) throw std::invalid_argument("sac: alpha must be >= 0");
  if (!(log_std_min < log_std_max)) throw std::invalid_argument("sac: bad log-std clamp");
}

namespace {

template <typename Scalar>
Scalar softplus(Scalar x) {
  return x > Scalar(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

template <typename Scalar>
SacAgent<Scalar>::SacAgent(SacConfig config, std::uint64_t seed) : config_(std::move(config)) {
  config_.validate();
  const int obs = config_.obs_dim;
  const int act = config_.act_dim;
  policy_ = Net(layer_sizes(obs, config_.hidden, 2 * act));
  q1_ = Net(layer_sizes(obs + act, config_.hidden, 1));
  q2_ = Net(layer_sizes(obs + act, config_.hidden, 1));
  std::mt19937_64 rng(seed);
  policy_.init_uniform_fan_in(rng);
  q1_.init_uniform_fan_in(rng);
  q2_.init_uniform_fan_in(rng);
  q1_target_ = q1_;
  q2_target_ = q2_;
  policy_opt_ = Adam<Scalar>(policy_.parameter_count(), config_.lr);
  q1_opt_ = Adam<Scalar>(q1_.parameter_count(), config_.lr);
  q2_opt_ = Adam<Scalar>(q2_.parameter_count(), config_.lr);
  alpha_opt_ = Adam<double>(1, config_.lr);
  log_alpha_ = config_.initial_log_alpha;
}

template <typename Scalar>
double SacAgent<Scalar>::alpha() const {
  return config_.fixed_alpha ? *config_.fixed_alpha : std::exp(log_alpha_);
}

template <typename Scalar>
typename SacAgent<Scalar>::Matrix SacAgent<Scalar>::q_input(const Matrix& obs,
                                                            const Matrix& actions) const {
  Matrix in(obs.rows() + actions.rows(), obs.cols());
  in.topRows(obs.rows()) = obs;
  in.bottomRows(actions.rows()) = actions;
  return in;
}

template <typename Scalar>
typename SacAgent<Scalar>::BatchSample SacAgent<Scalar>::sample_batch(
    const Matrix& obs, const Matrix& noise, typename Net::Cache* cache) const {
  const int act = config_.act_dim;
  const Matrix out = policy_.forward(obs, cache);
  BatchSample s;
  s.mean = out.topRows(act);
  const Matrix raw_log_std = out.bottomRows(act);
  const auto lo = static_cast<Scalar>(config_.log_std_min);
  const auto hi = static_cast<Scalar>(config_.log_std_max);
  s.log_std = raw_log_std.cwiseMax(lo).cwiseMin(hi);
  s.log_std_clamped = (raw_log_std.array() < lo) || (raw_log_std.array() > hi);

  const Eigen::Index b = obs.cols();
  s.actions.resize(act, b);
  s.log_prob.resize(b);
  const Scalar half_log_2pi = static_cast<Scalar>(0.5 * std::log(2.0 * std::numbers::pi));
  const Scalar log2 = static_cast<Scalar>(std::numbers::ln2);
  for (Eigen::Index c = 0; c < b; ++c) {
    Scalar lp = 0;
    for (int i = 0; i < act; ++i) {
      const Scalar eps = noise(i, c);
      const Scalar u = s.mean(i, c) + std::exp(s.log_std(i, c)) * eps;
      s.actions(i, c) = std::tanh(u);
      // log(1 - tanh(u)^2) = 2 (log 2 - u - softplus(-2u))
      const Scalar log_jac = Scalar(2) * (log2 - u - softplus(Scalar(-2) * u));
      lp += Scalar(-0.5) * eps * eps - s.log_std(i, c) - half_log_2pi - log_jac;
    }
    s.log_prob[c] = lp;
  }
  return s;
}

template <typename Scalar>
typename SacAgent<Scalar>::Sample SacAgent<Scalar>::sample(std::span<const double> obs,
                                                           bool deterministic,
                                                           std::mt19937_64& rng) const {
  if (obs.size() != static_cast<std::size_t>(config_.obs_dim)) {
    throw std::invalid_argument("SacAgent::sample: observation size mismatch");
  }
  const DenormalGuard guard;
  Matrix x(config_.obs_dim, 1);
  for (int k = 0; k < config_.obs_dim; ++k) x(k, 0) = static_cast<Scalar>(obs[k]);
  Sample out;
  out.action.resize(config_.act_dim);
  if (deterministic) {
    const Matrix y = policy_.forward(x);
    for (int i = 0; i < config_.act_dim; ++i) out.action[i] = std::tanh(static_cast<double>(y(i, 0)));
    return out;
  }
  std::normal_distribution<double> normal;
  Matrix noise(config_.act_dim, 1);
  for (int i = 0; i < config_.act_dim; ++i) noise(i, 0) = static_cast<Scalar>(normal(rng));
  const BatchSample s = sample_batch(x, noise);
  for (int i = 0; i < config_.act_dim; ++i) out.action[i] = static_cast<double>(s.actions(i, 0));
  out.log_prob = static_cast<double>(s.log_prob[0]);
  return out;
}

template <typename Scalar>
typename SacAgent<Scalar>::Vector SacAgent<Scalar>::critic_targets(const Batch& batch,
                                                                   const Matrix& next_noise) const {
  const BatchSample next = sample_batch(batch.next_obs, next_noise);
  const Matrix in = q_input(batch.next_obs, next.actions);
  const Matrix t1 = q1_target_.forward(in);
  const Matrix t2 = q2_target_.forward(in);
  const auto a = static_cast<Scalar>(alpha());
  const auto g = static_cast<Scalar>(config_.discount);
  Vector y(batch.size());
  for (Eigen::Index c = 0; c < batch.size(); ++c) {
    const Scalar soft_value = std::min(t1(0, c), t2(0, c)) - a * next.log_prob[c];
    y[c] = batch.rewards[c] + g * (Scalar(1) - batch.dones[c]) * soft_value;
  }
  return y;
}

namespace {

template <typename Net, typename Matrix, typename Vector, typename Scalar>
double squared_error_loss(const Net& net, const Matrix& in, const Vector& y,
                          std::span<Scalar> grad) {
  typename Net::Cache cache;
  const Matrix q = net.forward(in, grad.empty() ? nullptr : &cache);
  const Eigen::Index b = in.cols();
  const Matrix diff = q - y.transpose();
  const double loss = static_cast<double>(diff.squaredNorm()) / static_cast<double>(b);
  if (!grad.empty()) {
    std::fill(grad.begin(), grad.end(), Scalar(0));
    const Matrix g = diff * (Scalar(2) / static_cast<Scalar>(b));
    net.backward(cache, g, grad);
  }
  return loss;
}

}  // namespace

template <typename Scalar>
double SacAgent<Scalar>::critic_loss(const Batch& batch, const Matrix& next_noise, int which,
                                     std::span<Scalar> grad) const {
  const Vector y = critic_targets(batch, next_noise);
  const Matrix in = q_input(batch.obs, batch.actions);
  return squared_error_loss(which == 1 ? q1_ : q2_, in, y, grad);
}

template <typename Scalar>
double SacAgent<Scalar>::policy_loss(const Batch& batch, const Matrix& noise,
                                     std::span<Scalar> grad, double* mean_log_prob) const {
  const int act = config_.act_dim;
  const Eigen::Index b = batch.size();
  typename Net::Cache pcache;
  const BatchSample s = sample_batch(batch.obs, noise, grad.empty() ? nullptr : &pcache);
  const Matrix in = q_input(batch.obs, s.actions);
  typename Net::Cache c1;
  typename Net::Cache c2;
  const Matrix v1 = q1_.forward(in, grad.empty() ? nullptr : &c1);
  const Matrix v2 = q2_.forward(in, grad.empty() ? nullptr : &c2);
  const auto a = static_cast<Scalar>(alpha());

  double loss = 0.0;
  double lp_sum = 0.0;
  for (Eigen::Index c = 0; c < b; ++c) {
    const Scalar qmin = std::min(v1(0, c), v2(0, c));
    loss += static_cast<double>(a * s.log_prob[c] - qmin);
    lp_sum += static_cast<double>(s.log_prob[c]);
  }
  loss /= static_cast<double>(b);
  if (mean_log_prob) *mean_log_prob = lp_sum / static_cast<double>(b);
  if (grad.empty()) return loss;

  const Scalar inv_b = Scalar(1) / static_cast<Scalar>(b);
  Matrix g1 = Matrix::Zero(1, b);
  Matrix g2 = Matrix::Zero(1, b);
  for (Eigen::Index c = 0; c < b; ++c) {
    if (v1(0, c) <= v2(0, c)) {
      g1(0, c) = -inv_b;
    } else {
      g2(0, c) = -inv_b;
    }
  }
  const Matrix d_in = q1_.backward(c1, g1, {}) + q2_.backward(c2, g2, {});
  const Matrix d_action = d_in.bottomRows(act);

  Matrix d_out(2 * act, b);
  for (Eigen::Index c = 0; c < b; ++c) {
    for (int i = 0; i < act; ++i) {
      const Scalar act_v = s.actions(i, c);
      const Scalar sigma_eps = std::exp(s.log_std(i, c)) * noise(i, c);
      const Scalar d_u = d_action(i, c) * (Scalar(1) - act_v * act_v) + a * inv_b * Scalar(2) * act_v;
      d_out(i, c) = d_u;
      d_out(act + i, c) = s.log_std_clamped(i, c) ? Scalar(0) : d_u * sigma_eps - a * inv_b;
    }
  }
  std::fill(grad.begin(), grad.end(), Scalar(0));
  policy_.backward(pcache, d_out, grad);
  return loss;
}

template <typename Scalar>
double SacAgent<Scalar>::alpha_loss(double mean_log_prob, double* grad_log_alpha) const {
  const double shifted = mean_log_prob + config_.resolved_target_entropy();
  if (grad_log_alpha) *grad_log_alpha = -shifted;
  return -log_alpha_ * shifted;
}

template <typename Scalar>
SacLosses SacAgent<Scalar>::update(const Batch& batch, std::mt19937_64& rng) {
  const DenormalGuard guard;
  const int act = config_.act_dim;
  const Eigen::Index b = batch.size();
  if (b == 0) throw std::invalid_argument("SacAgent::update: empty batch");
  std::normal_distribution<double> normal;
  Matrix next_noise(act, b);
  Matrix noise(act, b);
  for (Eigen::Index k = 0; k < next_noise.size(); ++k) next_noise.data()[k] = static_cast<Scalar>(normal(rng));
  for (Eigen::Index k = 0; k < noise.size(); ++k) noise.data()[k] = static_cast<Scalar>(normal(rng));

  SacLosses losses;
  losses.alpha_value = alpha();

  const Vector y = critic_targets(batch, next_noise);
  const Matrix in = q_input(batch.obs, batch.actions);
  AlignedVector<Scalar> g1(q1_.parameter_count());
  AlignedVector<Scalar> g2(q2_.parameter_count());
  losses.q1 = squared_error_loss(q1_, in, y, std::span<Scalar>(g1));
  losses.q2 = squared_error_loss(q2_, in, y, std::span<Scalar>(g2));
  q1_opt_.step(q1_.parameters(), g1);
  q2_opt_.step(q2_.parameters(), g2);

  AlignedVector<Scalar> gp(policy_.parameter_count());
  double mean_lp = 0.0;
  losses.policy = policy_loss(batch, noise, gp, &mean_lp);
  policy_opt_.step(policy_.parameters(), gp);
  losses.mean_log_prob = mean_lp;

  double g_alpha = 0.0;
  losses.alpha = alpha_loss(mean_lp, &g_alpha);
  if (!config_.fixed_alpha) {
    double la[] = {log_alpha_};
    const double ga[] = {g_alpha};
    alpha_opt_.step(la, ga);
    log_alpha_ = la[0];
  }

  soft_update(q1_, q1_target_, config_.tau);
  soft_update(q2_, q2_target_, config_.tau);
  ++updates_;
  return losses;
}

template class SacAgent<float>;
template class SacAgent<double>;

}  // namespace mtqc
