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

#ifndef MPPO_TRAJECTORY_HPP_
#define MPPO_TRAJECTORY_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mppo/game.hpp"
#include "mppo/policy_net.hpp"

namespace mppo {

enum class SampleSource : std::uint8_t { SelfPlay, Demo };

struct TrainSample {
  EncodedObservation obs;
  ActionId action;
  double advantage = 0.0;
  double value_target = 0.0;
  double value = 0.0;               // critic estimate at collection time
  double behavior_log_prob = 0.0;   // log pi_k(action | obs) at collection time
  double episode_return = 0.0;      // the seat's terminal reward
  SampleSource source = SampleSource::SelfPlay;
  int seat = 0;
  std::uint64_t seed = 0;
  std::uint64_t policy_version = 0;
};

// One decision seen by a seat during an episode, before advantages exist.
struct StepRecord {
  EncodedObservation obs;
  ActionId action;
  double log_prob = 0.0;
  double value = 0.0;
};

// Turns each seat's decision sequence into samples. The seat's terminal
// reward is attached to its last decision; all other rewards are 0.
std::vector<TrainSample> build_samples(const std::array<std::vector<StepRecord>, kNumSeats>& steps,
                                       const std::array<double, kNumSeats>& final_rewards, double gamma,
                                       double lambda, SampleSource source, std::uint64_t seed,
                                       std::uint64_t policy_version);

struct DemoTrajectory {
  std::uint64_t seed = 0;
  std::vector<Decision> decisions;
  std::array<double, kNumSeats> final_scores{};
  std::string teacher;

  // The seat with a positive score, if any.
  std::optional<int> winner() const;
  bool operator==(const DemoTrajectory&) const = default;
};

// Plays reset(seed) to the end with `players` by seat.
DemoTrajectory record(const std::array<Player*, kNumSeats>& players, std::uint64_t seed, std::string teacher);

// Replay of a stored trajectory no longer matches the engine.
class ReplayDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Replays `traj` and verifies legality, termination and final scores.
// Throws ReplayDivergence otherwise.
GameState verify_replay(const DemoTrajectory& traj);

struct DemoCollection {
  std::vector<DemoTrajectory> trajectories;
  bool winner_only = true;

  // Returns whether the trajectory was admitted. Under winner-only, draws
  // and wins by seats outside `teacher_seats` are rejected.
  bool admit(DemoTrajectory traj, std::array<bool, kNumSeats> teacher_seats = {true, true, true, true});
  std::size_t size() const { return trajectories.size(); }
  bool empty() const { return trajectories.empty(); }
};

// Regenerates states by replay, evaluates the current policy/critic, and
// emits one Demo sample per decision of the training seats (the winner under
// winner-only; every seat otherwise). Throws ReplayDivergence on drift.
struct ReplayStats {
  int forwards = 0;
  int engine_steps = 0;
};
std::vector<TrainSample> replay_to_samples(const DemoTrajectory& traj, const PolicyParams& params, double gamma,
                                           double lambda, bool winner_only = true, std::uint64_t policy_version = 0,
                                           ReplayStats* stats = nullptr, bool value_all_states = false);

// `e=<u64>\tteacher=<id>\tscores=<s0,s1,s2,s3>\tactions=<seat:action,...>`
std::string serialize(const DemoTrajectory& traj);
// Throws std::invalid_argument on malformed lines.
DemoTrajectory parse_trajectory(const std::string& line);

std::string serialize(const DemoCollection& collection);
// Parses every line; trajectories whose replay diverges are dropped and
// reported through `dropped` (and a warning on stderr).
DemoCollection parse_collection(const std::string& text, bool winner_only = true, int* dropped = nullptr);
void save_demos(const DemoCollection& collection, const std::string& path);
DemoCollection load_demos(const std::string& path, bool winner_only = true, int* dropped = nullptr);

// Deterministic seeded partition: holdout gets n_holdout trajectories, both
// halves keep the original relative order. Throws if n_holdout >= size.
std::pair<DemoCollection, DemoCollection> split_holdout(const DemoCollection& collection, std::size_t n_holdout,
                                                        std::uint64_t split_seed);

}  // namespace mppo

#endif  // MPPO_TRAJECTORY_HPP_
