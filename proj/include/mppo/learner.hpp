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

#ifndef MPPO_LEARNER_HPP_
#define MPPO_LEARNER_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mppo/optimizer.hpp"
#include "mppo/policy_net.hpp"
#include "mppo/trajectory.hpp"

namespace mppo {

struct LearnerConfig {
  double clip_epsilon = 0.2;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double learning_rate = 3e-4;
  double max_grad_norm = 0.5;
  int batch_size = 512;
  int minibatch_size = 0;  // 0: whole batch
  int epochs_per_batch = 2;
  int demo_actor_count = 0;
  int selfplay_actor_count = 8;
  double con_gen_lo = 0.75;
  double con_gen_hi = 0.80;
  int policy_freeze_steps = 0;
  double gamma = 1.0;
  double lambda = 0.95;
  bool adv_norm = true;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Non-finite value met while computing or applying an update.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LossBreakdown {
  double total = 0.0;
  double policy = 0.0;   // -mean min(phi A, clip(phi) A)
  double value = 0.0;    // mean (V - target)^2, before value_coef
  double entropy = 0.0;  // mean policy entropy, before entropy_coef
  double clip_fraction = 0.0;
  double approx_kl = 0.0;  // mean (log pi_k - log pi)
  int samples = 0;
  int demo_samples = 0;
};

// Clipped surrogate + value + entropy over `batch`, with pi_k taken from each
// sample's behavior_log_prob. The same formula applies to Demo and SelfPlay
// samples. When `grad` is non-null it is resized and overwritten with the
// gradient of `total`. Throws NumericalError on any non-finite term.
LossBreakdown ppo_loss(std::span<const TrainSample> batch, const PolicyParams& params, const LearnerConfig& config,
                       std::vector<double>* grad = nullptr);
// Same, with pi_k recomputed from `params_k`.
LossBreakdown ppo_loss(std::span<const TrainSample> batch, const PolicyParams& params_k, const PolicyParams& params,
                       const LearnerConfig& config, std::vector<double>* grad = nullptr);

// 1 for value-head parameters, 0 elsewhere.
std::vector<std::uint8_t> value_head_mask(const PolicyParams& params);

struct UpdateStats {
  std::int64_t step = 0;
  LossBreakdown loss;       // averaged over every minibatch evaluation of the step
  double grad_norm = 0.0;   // last pre-clip norm
  double beta = 0.0;        // demo fraction of the batch
  bool policy_frozen = false;
};

// Owns the mutable parameters and optimizer state.
class Learner {
 public:
  Learner(PolicyParams init, LearnerConfig config, std::uint64_t seed);

  // Normalizes advantages jointly across the batch (if enabled), then runs
  // epochs_per_batch passes of minibatch Adam. During the first
  // policy_freeze_steps updates only the value head moves.
  UpdateStats update(std::vector<TrainSample> batch);

  const PolicyParams& params() const { return params_; }
  std::int64_t steps() const { return steps_; }
  const LearnerConfig& config() const { return config_; }

 private:
  PolicyParams params_;
  LearnerConfig config_;
  Adam adam_;
  Rng rng_;
  std::vector<std::uint8_t> freeze_mask_;
  std::int64_t steps_ = 0;
};

}  // namespace mppo

#endif  // MPPO_LEARNER_HPP_
