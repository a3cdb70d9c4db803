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

#ifndef MPPO_ADVANTAGE_HPP_
#define MPPO_ADVANTAGE_HPP_

#include <span>
#include <vector>

namespace mppo {

// One seat's decision sequence: reward received after step t and the value
// estimate at step t. The value after the last step is taken as 0 when
// `terminal`, else `bootstrap`.
struct EpisodeRollout {
  std::vector<double> rewards;
  std::vector<double> values;
  bool terminal = true;
  double bootstrap = 0.0;
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> targets;  // advantage + value
};

// Backward recursion adv_t = delta_t + gamma*lambda*adv_{t+1}.
// Throws std::invalid_argument on empty or mismatched input.
GaeResult gae(const EpisodeRollout& rollout, double gamma, double lambda);

// In place: zero mean, unit variance (population). A zero-variance batch is
// only centered. Batches of fewer than 2 entries are centered only.
void normalize_advantages(std::span<double> advantages);

}  // namespace mppo

#endif  // MPPO_ADVANTAGE_HPP_
