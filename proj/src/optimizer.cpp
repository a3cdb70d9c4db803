// Copyright 2026 The MPPO Mahjong Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mppo/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace mppo {

double Adam::step(std::span<double> params, std::span<const double> grad, std::span<const std::uint8_t> mask) {
  if (params.size() != m_.size() || grad.size() != m_.size() || (!mask.empty() && mask.size() != m_.size())) {
    throw std::invalid_argument("Adam::step: size mismatch");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (mask.empty() || mask[i]) sq += grad[i] * grad[i];
  }
  const double norm = std::sqrt(sq);
  double clip = 1.0;
  if (config_.max_grad_norm > 0.0 && norm > config_.max_grad_norm) clip = config_.max_grad_norm / norm;

  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    const double g = grad[i] * clip;
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * g;
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * g * g;
    params[i] -= config_.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + config_.epsilon);
  }
  return norm;
}

}  // namespace mppo
