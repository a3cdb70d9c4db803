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

#ifndef MPPO_OPTIMIZER_HPP_
#define MPPO_OPTIMIZER_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace mppo {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double max_grad_norm = 0.5;  // <= 0 disables clipping
};

class Adam {
 public:
  Adam(std::size_t size, AdamConfig config) : config_(config), m_(size, 0.0), v_(size, 0.0) {}

  // params -= step(grad). Entries where `mask` is false are left untouched
  // (their moments too); an empty mask updates everything. Returns the
  // pre-clip gradient norm.
  double step(std::span<double> params, std::span<const double> grad, std::span<const std::uint8_t> mask = {});

  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }

 private:
  AdamConfig config_;
  std::vector<double> m_, v_;
  std::int64_t t_ = 0;
};

}  // namespace mppo

#endif  // MPPO_OPTIMIZER_HPP_
