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

#include "mppo/advantage.hpp"

#include <cmath>
#include <stdexcept>

namespace mppo {

GaeResult gae(const EpisodeRollout& rollout, double gamma, double lambda) {
  const std::size_t n = rollout.rewards.size();
  if (n == 0) throw std::invalid_argument("gae: empty rollout");
  if (rollout.values.size() != n) throw std::invalid_argument("gae: rewards/values length mismatch");
  GaeResult out;
  out.advantages.resize(n);
  out.targets.resize(n);
  double next_value = rollout.terminal ? 0.0 : rollout.bootstrap;
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double delta = rollout.rewards[t] + gamma * next_value - rollout.values[t];
    running = delta + gamma * lambda * running;
    out.advantages[t] = running;
    out.targets[t] = running + rollout.values[t];
    next_value = rollout.values[t];
  }
  return out;
}

void normalize_advantages(std::span<double> advantages) {
  if (advantages.empty()) return;
  double mean = 0.0;
  for (double a : advantages) mean += a;
  mean /= static_cast<double>(advantages.size());
  double var = 0.0;
  for (double& a : advantages) {
    a -= mean;
    var += a * a;
  }
  if (advantages.size() < 2) return;
  var /= static_cast<double>(advantages.size());
  const double sd = std::sqrt(var);
  if (!(sd > 1e-12)) return;
  for (double& a : advantages) a /= sd;
}

}  // namespace mppo
