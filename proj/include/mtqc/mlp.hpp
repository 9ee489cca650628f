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
#include <vector>

#include <Eigen/Dense>

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

namespace mtqc {

/// Fully connected network with ReLU hidden layers and a linear output
/// layer. Samples are columns: inputs are (in x batch), outputs
/// (out x batch). All parameters live in one flat buffer, layer by layer,
/// weights (column-major, out x in) followed by biases.
/// Heap buffer aligned like Eigen's own matrices.
template <typename T>
using AlignedVector = std::vector<T, Eigen::aligned_allocator<T>>;

template <typename Scalar>
class Mlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using WeightMap = Eigen::Map<Matrix>;
  using ConstWeightMap = Eigen::Map<const Matrix>;
  using BiasMap = Eigen::Map<Vector>;
  using ConstBiasMap = Eigen::Map<const Vector>;

  /// Post-activation outputs of every layer; activations[0] is the input.
  struct Cache {
    std::vector<Matrix> activations;
  };

  Mlp() = default;
  /// `sizes` = {input, hidden..., output}; parameters start at zero.
  explicit Mlp(std::vector<int> sizes);

  /// PyTorch-style default: U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights
  /// and biases.
  void init_uniform_fan_in(std::mt19937_64& rng);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t n_layers() const { return sizes_.size() - 1; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<Scalar> parameters() { return params_; }
  std::span<const Scalar> parameters() const { return params_; }

  WeightMap weight(std::size_t layer);
  ConstWeightMap weight(std::size_t layer) const;
  BiasMap bias(std::size_t layer);
  ConstBiasMap bias(std::size_t layer) const;

  Matrix forward(const Matrix& x, Cache* cache = nullptr) const;

  /// Back-propagates dL/d(output) through the cached forward pass. Parameter
  /// gradients are accumulated into `grad` (same layout as parameters())
  /// when it is non-empty. Returns dL/d(input).
  Matrix backward(const Cache& cache, const Matrix& grad_out, std::span<Scalar> grad) const;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + static_cast<std::size_t>(sizes_[layer + 1]) * sizes_[layer];
  }

  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  // Aligned so vectorized products sum in the same order for every
  // instance; otherwise results depend on where the heap put the buffer.
  AlignedVector<Scalar> params_;
};

/// Sets flush-to-zero and denormals-are-zero on the calling thread for its
/// lifetime. Tiny gradient moments otherwise turn into denormals and slow
/// float training several-fold.
class DenormalGuard {
 public:
#if defined(__SSE__)
  DenormalGuard() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
  ~DenormalGuard() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#endif
 public:
  DenormalGuard(const DenormalGuard&) = delete;
  DenormalGuard& operator=(const DenormalGuard&) = delete;
};

/// target <- tau * online + (1 - tau) * target. Throws on shape mismatch.
template <typename Scalar>
void soft_update(const Mlp<Scalar>& online, Mlp<Scalar>& target, double tau);

/// Adam over a flat parameter buffer.
template <typename Scalar>
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(std::span<Scalar> params, std::span<const Scalar> grad);
  std::uint64_t steps() const { return t_; }
  double learning_rate() const { return lr_; }

 private:
  double lr_ = 3e-4;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::uint64_t t_ = 0;
  std::vector<Scalar> m_;
  std::vector<Scalar> v_;
};

extern template class Mlp<float>;
extern template class Mlp<double>;
extern template class Adam<float>;
extern template class Adam<double>;

}  // namespace mtqc
