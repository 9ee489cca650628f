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

#include "mtqc/replay_buffer.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace mtqc {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int obs_dim, int act_dim)
    : capacity_(capacity), obs_dim_(obs_dim), act_dim_(act_dim) {
  if (capacity == 0 || obs_dim < 1 || act_dim < 1) {
    throw std::invalid_argument("ReplayBuffer: capacity and dimensions must be positive");
  }
}

void ReplayBuffer::add(std::span<const double> obs, std::span<const double> action, double reward,
                       std::span<const double> next_obs, bool done) {
  if (obs.size() != static_cast<std::size_t>(obs_dim_) ||
      next_obs.size() != static_cast<std::size_t>(obs_dim_) ||
      action.size() != static_cast<std::size_t>(act_dim_)) {
    throw std::invalid_argument("ReplayBuffer::add: transition has the wrong shape");
  }
  auto put = [](std::vector<float>& dst, std::size_t slot, std::span<const double> src) {
    const std::size_t width = src.size();
    if (dst.size() < (slot + 1) * width) dst.resize((slot + 1) * width);
    std::transform(src.begin(), src.end(), dst.begin() + slot * width,
                   [](double v) { return static_cast<float>(v); });
  };
  const std::size_t slot = next_;
  put(obs_, slot, obs);
  put(actions_, slot, action);
  put(next_obs_, slot, next_obs);
  const double r[] = {reward};
  const double d[] = {done ? 1.0 : 0.0};
  put(rewards_, slot, r);
  put(dones_, slot, d);
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch,
                                                      std::mt19937_64& rng) const {
  if (size_ == 0) throw std::logic_error("ReplayBuffer: cannot sample from an empty buffer");
  if (batch > size_) throw std::invalid_argument("ReplayBuffer: batch larger than buffer");
  std::vector<std::size_t> out;
  out.reserve(batch);
  std::unordered_set<std::size_t> chosen;
  for (std::size_t j = size_ - batch; j < size_; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t t = pick(rng);
    const std::size_t v = chosen.count(t) ? j : t;
    chosen.insert(v);
    out.push_back(v);
  }
  return out;
}

template <typename Scalar>
TransitionBatch<Scalar> ReplayBuffer::gather(std::span<const std::size_t> indices) const {
  const auto b = static_cast<Eigen::Index>(indices.size());
  TransitionBatch<Scalar> out;
  out.obs.resize(obs_dim_, b);
  out.next_obs.resize(obs_dim_, b);
  out.actions.resize(act_dim_, b);
  out.rewards.resize(b);
  out.dones.resize(b);
  for (Eigen::Index c = 0; c < b; ++c) {
    const std::size_t i = indices[c];
    if (i >= size_) throw std::out_of_range("ReplayBuffer::gather: index out of range");
    for (int k = 0; k < obs_dim_; ++k) {
      out.obs(k, c) = static_cast<Scalar>(obs_[i * obs_dim_ + k]);
      out.next_obs(k, c) = static_cast<Scalar>(next_obs_[i * obs_dim_ + k]);
    }
    for (int k = 0; k < act_dim_; ++k) out.actions(k, c) = static_cast<Scalar>(actions_[i * act_dim_ + k]);
    out.rewards[c] = static_cast<Scalar>(rewards_[i]);
    out.dones[c] = static_cast<Scalar>(dones_[i]);
  }
  return out;
}

template TransitionBatch<float> ReplayBuffer::gather<float>(std::span<const std::size_t>) const;
template TransitionBatch<double> ReplayBuffer::gather<double>(std::span<const std::size_t>) const;

}  // namespace mtqc
