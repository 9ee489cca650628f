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

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mtqc {

/// A sampled minibatch, one transition per column.
template <typename Scalar>
struct TransitionBatch {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix obs;
  Matrix actions;
  Vector rewards;
  Matrix next_obs;
  Vector dones;

  Eigen::Index size() const { return obs.cols(); }
};

/// Fixed-capacity ring of transitions; once full, the oldest entry is
/// overwritten first. Values are stored in single precision.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int obs_dim, int act_dim);

  void add(std::span<const double> obs, std::span<const double> action, double reward,
           std::span<const double> next_obs, bool done);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }

  /// Distinct slot indices drawn uniformly (Floyd's algorithm). Throws
  /// std::logic_error when the buffer is empty, std::invalid_argument when
  /// `batch` exceeds size().
  std::vector<std::size_t> sample_indices(std::size_t batch, std::mt19937_64& rng) const;

  template <typename Scalar>
  TransitionBatch<Scalar> gather(std::span<const std::size_t> indices) const;

  template <typename Scalar>
  TransitionBatch<Scalar> sample(std::size_t batch, std::mt19937_64& rng) const {
    const auto idx = sample_indices(batch, rng);
    return gather<Scalar>(idx);
  }

  /// Reward stored in slot `index` (slot order, not insertion order).
  double reward_at(std::size_t index) const { return rewards_.at(index); }

 private:
  std::size_t capacity_;
  int obs_dim_;
  int act_dim_;
  std::size_t next_ = 0;
  std::size_t size_ = 0;
  std::vector<float> obs_;
  std::vector<float> actions_;
  std::vector<float> rewards_;
  std::vector<float> next_obs_;
  std::vector<float> dones_;
};

extern template TransitionBatch<float> ReplayBuffer::gather<float>(std::span<const std::size_t>) const;
extern template TransitionBatch<double> ReplayBuffer::gather<double>(std::span<const std::size_t>) const;

}  // namespace mtqc
