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

#ifndef MPPO_METRICS_HPP_
#define MPPO_METRICS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mppo/bots.hpp"
#include "mppo/policy_net.hpp"
#include "mppo/trajectory.hpp"

namespace mppo {

using ActionDistribution = std::array<double, kNumActions>;

// A policy viewed as a distribution over actions per observation.
class ActionPolicy {
 public:
  virtual ~ActionPolicy() = default;
  virtual ActionDistribution distribution(const Observation& obs) const = 0;
};

class NetPolicy : public ActionPolicy {
 public:
  explicit NetPolicy(const PolicyParams& params) : params_(params) {}
  ActionDistribution distribution(const Observation& obs) const override;

 private:
  const PolicyParams& params_;
};

// Deterministic bot as a one-hot distribution.
class BotPolicy : public ActionPolicy {
 public:
  explicit BotPolicy(BotProfile profile) : profile_(std::move(profile)) {}
  ActionDistribution distribution(const Observation& obs) const override;

 private:
  BotProfile profile_;
};

ActionDistribution one_hot(ActionId a);

// (1/2) sum_a |p(a) - q(a)|.
double total_variation(const ActionDistribution& p, const ActionDistribution& q);

// Mean total variation over `states`. States with a single legal action are
// skipped; throws std::invalid_argument when nothing remains.
double d_action(const ActionPolicy& a, const ActionPolicy& b, const std::vector<Observation>& states);

// One decision taken by a demonstrator, with its state.
struct DemoDecision {
  Observation obs;
  ActionId action;
};

// Replays `demos` and returns every decision of the seats selected for
// comparison (the winner under winner-only collections, every seat
// otherwise) that had more than one legal action.
std::vector<DemoDecision> demo_decisions(const DemoCollection& demos);

// D_action against a one-hot teacher read from held-out decisions:
// mean over states of 1 - pi_student(a_teacher | s).
double d_action_vs_demos(const ActionPolicy& student, const std::vector<DemoDecision>& decisions);

struct PatternDistribution {
  std::vector<Pattern> patterns = major_patterns();
  std::vector<double> counts = std::vector<double>(major_patterns().size(), 0.0);
  int wins = 0;
  int games = 0;
  bool principal_only = false;

  // counts[p] / wins; 0 when there are no wins.
  double probability(std::size_t i) const { return wins ? counts[i] / wins : 0.0; }
  void add_win(const FanResult& fan);
  std::string to_json() const;
};

// (1/2) sum_p |pi1(p) - pi2(p)|. Throws std::invalid_argument when the
// pattern lists differ.
double d_game(const PatternDistribution& a, const PatternDistribution& b);

using PlayerFactory = std::function<std::unique_ptr<Player>(std::uint64_t game_seed, int seat)>;

PlayerFactory bot_factory(const BotProfile& profile);
PlayerFactory random_factory();
// Samples from the network with a per-game RNG, or plays greedily.
PlayerFactory net_factory(std::shared_ptr<const PolicyParams> params, bool greedy = false);

class NetPlayer : public Player {
 public:
  NetPlayer(std::shared_ptr<const PolicyParams> params, std::uint64_t seed, bool greedy)
      : params_(std::move(params)), rng_(seed), greedy_(greedy) {}
  ActionId act(const Observation& obs) override;
  std::string name() const override { return "net"; }

 private:
  std::shared_ptr<const PolicyParams> params_;
  Rng rng_;
  bool greedy_;
};

// Self-play of four copies from `factory` on `seeds`; every winning hand's
// pattern signature (or principal pattern) is counted.
PatternDistribution pattern_histogram(const PlayerFactory& factory, const std::vector<std::uint64_t>& seeds,
                                      bool principal_only = false, int threads = 1);
// Winning hands recorded in a demonstration collection.
PatternDistribution pattern_histogram(const DemoCollection& demos, bool principal_only = false);

struct EvalReport {
  double win_rate = 0.0;  // X wins / decided games
  double avg_score = 0.0; // X's mean reward per seat per game
  int games = 0;
  int draws = 0;
  int x_wins = 0;
  int y_wins = 0;
  bool seat_swapped = true;
  // 95% normal-approximation half-width on win_rate.
  double ci95() const;
  std::string to_json() const;
};

// For each seed: X at seats 0 and 2 with Y at 1 and 3, then the reverse.
EvalReport evaluate_seatswap(const PlayerFactory& x, const PlayerFactory& y, const std::vector<std::uint64_t>& seeds,
                             int threads = 1);

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

struct PlotRow {
  std::int64_t step = 0;
  std::string metric;
  double value = 0.0;
};
// CSV with header "step,metric,value".
void write_plot_csv(const std::string& path, const std::vector<PlotRow>& rows);

}  // namespace mppo

#endif  // MPPO_METRICS_HPP_
