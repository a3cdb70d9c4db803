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

#ifndef MPPO_BOTS_HPP_
#define MPPO_BOTS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mppo/game.hpp"

namespace mppo {

// Hand goals the scripted bots steer toward. Each maps to one or more of the
// implemented scoring patterns.
enum class GoalFamily : std::uint8_t {
  Plain,            // any GWP; rarely reaches 8 points on its own
  HalfFlush,        // param: suit
  FullFlush,        // param: suit
  AllPungs,
  MixedStraight,    // param: suit permutation
  PureStraight,     // param: suit
  MixedTripleChow,  // param: chow base rank - 1
  AllTypes,
  SevenPairs,
  ThirteenOrphans,
  KnittedStraight,  // param: suit permutation
  HonorsKnitted,    // param: suit permutation
};
inline constexpr int kNumGoalFamilies = 12;

struct Goal {
  GoalFamily family = GoalFamily::Plain;
  int param = 0;
};

const std::vector<Goal>& all_goals();

// Exchanges to reach a winning hand of the goal's shape, -1 when complete,
// std::nullopt when the exposed melds rule the goal out. `concealed` is the
// seat's concealed tiles.
std::optional<int> goal_distance(const Goal& goal, const TileCounts& concealed, std::span<const Meld> exposed);

struct BotProfile {
  std::string name;
  // Added preference per goal family, in exchange units (higher = preferred).
  std::array<double, kNumGoalFamilies> style_weights{};
  double claim_aggressiveness = 0.5;  // in [0, 1]
  bool keep_pairs = false;            // never break a pair while alternatives exist
  std::uint64_t tie_break_seed = 0;
};

// Shipped profiles: "balanced" (strong), "claimer" (mid-tier, claim-heavy),
// "pairs" (weak pairs-seeker).
const std::vector<BotProfile>& shipped_profiles();
// Throws std::invalid_argument for unknown names.
const BotProfile& profile_by_name(const std::string& name);

// Preference of a hand under a profile: min over goals of distance - weight.
// Lower is better.
struct HandValue {
  double score = 1e9;
  Goal goal;
};
HandValue evaluate_hand(const BotProfile& profile, const TileCounts& concealed, std::span<const Meld> exposed);

// Deterministic heuristic decision for `obs`.
ActionId bot_act(const BotProfile& profile, const Observation& obs);

class ScriptedPlayer : public Player {
 public:
  explicit ScriptedPlayer(BotProfile profile) : profile_(std::move(profile)) {}
  ActionId act(const Observation& obs) override { return bot_act(profile_, obs); }
  std::string name() const override { return profile_.name; }
  const BotProfile& profile() const { return profile_; }

 private:
  BotProfile profile_;
};

}  // namespace mppo

#endif  // MPPO_BOTS_HPP_
