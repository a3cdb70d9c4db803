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

#ifndef MPPO_ENGINE_HPP_
#define MPPO_ENGINE_HPP_

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mppo/scoring.hpp"
#include "mppo/tile.hpp"

namespace mppo {

// Frozen action enumeration:
//   0..33  discard tile kind i
//   34     chow, claimed tile lowest
//   35     chow, claimed tile in the middle
//   36     chow, claimed tile highest
//   37     pung
//   38     kong (claimed exposed kong, or own-turn kong on the lowest eligible tile)
//   39     win
//   40     pass
class ActionId {
 public:
  static constexpr int kChowLeft = 34;
  static constexpr int kChowMiddle = 35;
  static constexpr int kChowRight = 36;
  static constexpr int kPung = 37;
  static constexpr int kKong = 38;
  static constexpr int kWin = 39;
  static constexpr int kPass = 40;
  static constexpr int kCount = 41;

  constexpr ActionId() = default;
  // Throws std::out_of_range outside [0, kCount).
  explicit ActionId(int value);

  static constexpr ActionId discard(Tile t) { return ActionId(Raw{}, t.index()); }
  static constexpr ActionId pass() { return ActionId(Raw{}, kPass); }
  static constexpr ActionId win() { return ActionId(Raw{}, kWin); }
  static constexpr ActionId pung() { return ActionId(Raw{}, kPung); }
  static constexpr ActionId kong() { return ActionId(Raw{}, kKong); }
  // offset: position of the claimed tile inside the chow (0 lowest .. 2 highest).
  static constexpr ActionId chow(int offset) { return ActionId(Raw{}, kChowLeft + offset); }

  constexpr int value() const { return value_; }
  constexpr bool is_discard() const { return value_ < kNumTileKinds; }
  constexpr bool is_chow() const { return value_ >= kChowLeft && value_ <= kChowRight; }
  constexpr Tile discard_tile() const { return Tile::from_index(value_); }
  std::string to_string() const;

  constexpr auto operator<=>(const ActionId&) const = default;

 private:
  struct Raw {};
  constexpr ActionId(Raw, int v) : value_(static_cast<std::uint8_t>(v)) {}
  std::uint8_t value_ = kPass;
};

using LegalMask = std::bitset<ActionId::kCount>;

enum class Phase : std::uint8_t { AwaitDiscard, AwaitClaims, Finished };

struct SeatState {
  TileCounts hand{};            // concealed tiles
  std::vector<Meld> melds;      // exposed melds and concealed kongs
  std::vector<Tile> discards;   // discards that were not claimed, in order

  bool operator==(const SeatState&) const = default;
};

struct PendingDiscard {
  Tile tile;
  int from = 0;
  bool operator==(const PendingDiscard&) const = default;
};

struct GameResult {
  std::optional<int> winner;       // nullopt for an exhaustive draw
  std::optional<int> discarder;    // seat that dealt in, for discard wins
  bool self_drawn = false;
  FanResult fan;
  bool operator==(const GameResult&) const = default;
};

struct GameState {
  std::uint64_t seed = 0;
  Wall wall;
  std::array<SeatState, kNumSeats> seats;
  int turn = 0;
  Phase phase = Phase::AwaitDiscard;
  std::array<Wind, kNumSeats> seat_winds{Wind::East, Wind::South, Wind::West, Wind::North};
  Wind prevalent_wind = Wind::East;
  std::optional<PendingDiscard> last_discard;
  std::optional<Tile> last_drawn;  // tile the acting seat just drew
  std::array<std::optional<ActionId>, kNumSeats> claims;
  std::optional<GameResult> result;
  std::array<double, kNumSeats> rewards{};
  int steps = 0;

  bool operator==(const GameState&) const = default;
};

class IllegalAction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NoPendingDecision : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct StepResult {
  GameState state;
  bool terminal = false;
  std::array<double, kNumSeats> rewards{};
};

// Reward model: self-drawn win collects (8 + fan) from each loser; a discard
// win collects (8 + fan) from the discarder and 8 from each other loser. All
// values scaled by kRewardScale.
inline constexpr double kRewardScale = 1.0 / 32.0;

GameState reset(std::uint64_t seed);

// Throws NoPendingDecision when `seat` has nothing to decide (wrong turn,
// already claimed, discarder during claims, finished game).
LegalMask legal_actions(const GameState& state, int seat);

// Seats that currently owe a decision with more than one legal option, in
// clockwise order from the discarder (or the single acting seat). Empty only
// for finished games.
std::vector<int> pending_seats(const GameState& state);

// Throws IllegalAction when `action` is not in legal_actions(state, seat).
StepResult step(const GameState& state, int seat, ActionId action);

// Resolves a claim round. `claims` holds each non-discarding seat's choice;
// missing entries count as Pass. Priority: Win > Pung/Kong > Chow; among wins
// the seat nearest clockwise from the discarder takes the tile.
GameState claim_resolution(const GameState& state, const std::array<std::optional<ActionId>, kNumSeats>& claims);

// Tile conservation over wall, hands, melds, discards and the pending discard.
bool tiles_conserved(const GameState& state);

std::array<double, kNumSeats> settlement(const GameResult& result);

// Multi-line ASCII dump for debugging.
std::string describe(const GameState& state);

}  // namespace mppo

#endif  // MPPO_ENGINE_HPP_
