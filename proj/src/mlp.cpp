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

#include "mtqc/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace mtqc {

template <typename Scalar>
Mlp<Scalar>::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] < 1 || sizes_[l + 1] < 1) throw std::invalid_argument("Mlp: layer size < 1");
    offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l + 1]) * (sizes_[l] + 1);
  }
  params_.assign(total, Scalar(0));
}

template <typename Scalar>
void Mlp<Scalar>::init_uniform_fan_in(std::mt19937_64& rng) {
  for (std::size_t l = 0; l < n_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    auto w = weight(l);
    for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = static_cast<Scalar>(dist(rng));
    auto b = bias(l);
    for (Eigen::Index k = 0; k < b.size(); ++k) b[k] = static_cast<Scalar>(dist(rng));
  }
}

template <typename Scalar>
typename Mlp<Scalar>::WeightMap Mlp<Scalar>::weight(std::size_t layer) {
  return WeightMap(params_.data() + weight_offset(layer), sizes_[layer + 1], sizes_[layer]);
}

template <typename Scalar>
typename Mlp<Scalar>::ConstWeightMap Mlp<Scalar>::weight(std::size_t layer) const {
  return ConstWeightMap(params_.data() + weight_offset(layer), sizes_[layer + 1], sizes_[layer]);
}

template <typename Scalar>
typename Mlp<Scalar>::BiasMap Mlp<Scalar>::bias(std::size_t layer) {
  return BiasMap(params_.data() + bias_offset(layer), sizes_[layer + 1]);
}

template <typename Scalar>
typename Mlp<Scalar>::ConstBiasMap Mlp<Scalar>::bias(std::size_t layer) const {
  return ConstBiasMap(params_.data() + bias_offset(layer), sizes_[layer + 1]);
}

template <typename Scalar>
typename Mlp<Scalar>::Matrix Mlp<Scalar>::forward(const Matrix& x, Cache* cache) const {
  if (x.rows() != input_size()) throw std::invalid_argument("Mlp::forward: input size mismatch");
  if (cache) {
    cache->activations.resize(n_layers() + 1);
    cache->activations[0] = x;
  }
  Matrix h = x;
  for (std::size_t l = 0; l < n_layers(); ++l) {
    Matrix z = weight(l) * h;
    z.colwise() += bias(l);
    if (l + 1 < n_layers()) z = z.cwiseMax(Scalar(0));
    h = std::move(z);
    if (cache) cache->activations[l + 1] = h;
  }
  return h;
}

template <typename Scalar>
typename Mlp<Scalar>::Matrix Mlp<Scalar>::backward(const Cache& cache, const Matrix& grad_out,
                                                   std::span<Scalar> grad) const {
  if (cache.activations.size() != n_layers() + 1) {
    throw std::invalid_argument("Mlp::backward: cache does not match network");
  }
  if (!grad.empty() && grad.size() != params_.size()) {
    throw std::invalid_argument("Mlp::backward: gradient buffer size mismatch");
  }
  Matrix delta = grad_out;
  for (std::size_t l = n_layers(); l-- > 0;) {
    if (l + 1 < n_layers()) {
      // ReLU derivative from the post-activation value.
      delta = delta.cwiseProduct(
          (cache.activations[l + 1].array() > Scalar(0)).template cast<Scalar>().matrix());
    }
    if (!grad.empty()) {
      WeightMap gw(grad.data() + weight_offset(l), sizes_[l + 1], sizes_[l]);
      BiasMap gb(grad.data() + bias_offset(l), sizes_[l + 1]);
      gw.noalias() += delta * cache.activations[l].transpose();
      gb += delta.rowwise().sum();
    }
    delta = weight(l).transpose() * delta;
  }
  return delta;
}

template <typename Scalar>
void soft_update(const Mlp<Scalar>& online, Mlp<Scalar>& target, double tau) {
  if (online.sizes() != target.sizes()) throw std::invalid_argument("soft_update: shape mismatch");
  auto src = online.parameters();
  auto dst = target.parameters();
  const Scalar t = static_cast<Scalar>(tau);
  const Scalar keep = static_cast<Scalar>(1.0 - tau);
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = t * src[k] + keep * dst[k];
}

template <typename Scalar>
Adam<Scalar>::Adam(std::size_t n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, Scalar(0)), v_(n, Scalar(0)) {}

template <typename Scalar>
void Adam<Scalar>::step(std::span<Scalar> params, std::span<const Scalar> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("Adam::step: size mismatch");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const Scalar b1 = static_cast<Scalar>(beta1_);
  const Scalar b2 = static_cast<Scalar>(beta2_);
  const Scalar step = static_cast<Scalar>(lr_ / c1);
  const Scalar inv_c2 = static_cast<Scalar>(1.0 / c2);
  const Scalar eps = static_cast<Scalar>(eps_);
  for (std::size_t k = 0; k < params.size(); ++k) {
    m_[k] = b1 * m_[k] + (Scalar(1) - b1) * grad[k];
    v_[k] = b2 * v_[k] + (Scalar(1) - b2) * grad[k] * grad[k];
    params[k] -= step * m_[k] / (std::sqrt(v_[k] * inv_c2) + eps);
  }
}

template class Mlp<float>;
template class Mlp<double>;
template class Adam<float>;
template class Adam<double>;
template void soft_update<float>(const Mlp<float>&, Mlp<float>&, double);
template void soft_update<double>(const Mlp<double>&, Mlp<double>&, double);

}  // namespace mtqc
