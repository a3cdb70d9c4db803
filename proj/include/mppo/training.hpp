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

#ifndef MPPO_TRAINING_HPP_
#define MPPO_TRAINING_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mppo/learner.hpp"
#include "mppo/throttle.hpp"
#include "mppo/trajectory.hpp"

namespace mppo {

struct TrainingConfig {
  LearnerConfig learner;
  NetShape net;
  std::uint64_t seed = 1;
  int learner_steps = 100;
  double time_budget_seconds = 0.0;  // threaded mode only; 0 = no limit
  int checkpoint_every = 0;          // 0 = final checkpoint only (when out_dir is set)
  std::string out_dir;
  bool deterministic = true;         // actors interleaved on the calling thread
  int queue_capacity = 0;            // 0 = 2 * batch_size
  // Virtual-time cost model of the deterministic scheduler, in units of one
  // policy forward pass on an actor.
  double engine_step_cost = 0.1;
  double learner_sample_cost = 0.002;  // per sample per epoch
  double init_policy_scale = 0.01;
  bool lfd_value_all_states = true;  // LfD actors also evaluate non-training seats
  double starvation_timeout_seconds = 30.0;

  void validate() const;
};

// Versioned immutable parameter snapshot handed from learner to actors.
struct Snapshot {
  std::uint64_t version = 0;
  PolicyParams params;
};

class SnapshotBox {
 public:
  explicit SnapshotBox(std::shared_ptr<const Snapshot> initial) : current_(std::move(initial)) {}
  std::shared_ptr<const Snapshot> acquire() const {
    std::lock_guard lock(mu_);
    return current_;
  }
  // Throws std::logic_error if the version does not increase.
  void publish(std::shared_ptr<const Snapshot> next);

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const Snapshot> current_;
};

struct EpisodeOutput {
  std::vector<TrainSample> samples;
  int forwards = 0;
  int engine_steps = 0;
};

// One self-play game with the snapshot at all four seats; samples from every seat.
EpisodeOutput selfplay_episode(const PolicyParams& params, std::uint64_t version, std::uint64_t game_seed, Rng& rng,
                               double gamma, double lambda);

struct StepLog {
  UpdateStats update;
  double con_gen_ratio = 0.0;
  double beta_window = 0.0;  // demo share of samples consumed over the last 20 steps
  double beta_total = 0.0;   // demo share of every sample consumed so far
  double time = 0.0;         // virtual units (deterministic) or seconds
  double pause = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t consumed = 0;
  std::uint64_t dropped = 0;
  std::uint64_t snapshot_version = 0;

  std::string to_json() const;
};

struct TrainingResult {
  PolicyParams params;
  std::vector<StepLog> log;
  std::vector<std::string> checkpoints;
  std::uint64_t generated = 0;
  std::uint64_t generated_demo = 0;
  std::uint64_t consumed = 0;
  std::uint64_t consumed_demo = 0;
  double beta() const { return consumed ? static_cast<double>(consumed_demo) / static_cast<double>(consumed) : 0.0; }
};

using StepCallback = std::function<void(const StepLog&)>;

// MPPO: selfplay_actor_count self-play actors plus demo_actor_count LfD
// actors replaying `demos`. `init` defaults to an orthogonal init from seed.
TrainingResult run_training(const TrainingConfig& config, const DemoCollection& demos,
                            const std::optional<PolicyParams>& init = std::nullopt, const StepCallback& on_step = {});

// Standard PPO: the same machinery with no LfD actor pool.
TrainingResult run_ppo_baseline(const TrainingConfig& config, const std::optional<PolicyParams>& init = std::nullopt,
                                const StepCallback& on_step = {});

struct BcConfig {
  int epochs = 4;
  int minibatch_size = 256;
  double learning_rate = 1e-3;
  double value_coef = 0.5;
  bool winner_only = false;  // false: every decision in the demo games
  std::uint64_t seed = 0;
};

struct BcStats {
  std::vector<double> epoch_loss;     // mean cross-entropy per epoch
  std::vector<double> epoch_accuracy; // argmax agreement per epoch
  std::size_t samples = 0;
};

// Cross-entropy behavior cloning (plus value regression on episode returns).
PolicyParams behavior_cloning(PolicyParams init, const DemoCollection& demos, const BcConfig& config,
                              BcStats* stats = nullptr);

struct ProbePair {
  EncodedObservation obs;
  ActionId action;
  double advantage = 0.0;
};

// Demo pairs from replaying `demos` under `params`, keeping those whose
// advantage has the requested sign (> 0 or < 0).
std::vector<ProbePair> probe_pairs(const PolicyParams& params, const DemoCollection& demos, double gamma,
                                   double lambda, bool positive, std::size_t limit);

// Offline-only unclipped updates: gradient ascent on A * pi(a|s) / pi_k(a|s)
// with pi_k fixed at the start. Returns pi(a_i|s_i) for every pair before
// the first step and after each step ([steps + 1][pairs]). With `joint` the
// update sums over all pairs; otherwise each pair is probed alone from
// `params`.
std::vector<std::vector<double>> offline_ascent_probe(const PolicyParams& params,
                                                      const std::vector<ProbePair>& pairs, int steps,
                                                      double learning_rate, bool joint);

}  // namespace mppo

#endif  // MPPO_TRAINING_HPP_
