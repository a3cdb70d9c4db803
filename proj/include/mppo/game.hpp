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

#ifndef MPPO_GAME_HPP_
#define MPPO_GAME_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mppo/engine.hpp"
#include "mppo/observation.hpp"
#include "mppo/rng.hpp"

namespace mppo {

// Anything that picks an action for one seat. Implementations may keep
// internal state (an RNG); they must only return actions set in obs.legal.
class Player {
 public:
  virtual ~Player() = default;
  virtual ActionId act(const Observation& obs) = 0;
  virtual std::string name() const = 0;
};

// Uniform over legal actions.
class RandomPlayer : public Player {
 public:
  explicit RandomPlayer(std::uint64_t seed) : rng_(seed) {}
  ActionId act(const Observation& obs) override;
  std::string name() const override { return "random"; }

 private:
  Rng rng_;
};

struct Decision {
  int seat = 0;
  ActionId action;
  bool operator==(const Decision&) const = default;
};

struct GameRecord {
  std::uint64_t seed = 0;
  std::vector<Decision> decisions;
  GameState final_state;
  // Final scores as written in the log header, when present.
  std::optional<std::array<double, kNumSeats>> logged_scores;
};

// Observer hook invoked before each decision with the state and the
// observation handed to the player.
using DecisionHook = std::function<void(const GameState&, const Observation&, ActionId)>;

// Plays one game from reset(seed). Players are indexed by seat.
GameRecord play_game(std::uint64_t seed, const std::array<Player*, kNumSeats>& players,
                     const DecisionHook& hook = {});

// Re-executes a decision list from reset(seed); throws IllegalAction or
// NoPendingDecision on divergence. The hook sees every replayed decision.
GameState replay(std::uint64_t seed, const std::vector<Decision>& decisions, const DecisionHook& hook = {});

// Replay log: "seed=<u64>" then one "seat=<0-3> action=<id>" line per decision.
std::string write_replay_log(const GameRecord& record);
GameRecord read_replay_log(const std::string& text);

}  // namespace mppo

#endif  // MPPO_GAME_HPP_
