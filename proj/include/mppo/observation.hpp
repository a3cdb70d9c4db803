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

#ifndef MPPO_OBSERVATION_HPP_
#define MPPO_OBSERVATION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mppo/engine.hpp"

namespace mppo {

// Frozen numeric feature layout. Seats are relative to the observer:
// 0 self, 1 next (acts after self), 2 opposite, 3 previous.
namespace features {
inline constexpr int kHandPlanes = 0;        // 4 x 34: hand count > plane
inline constexpr int kMeldCounts = 136;      // 4 seats x 34: visible meld tiles / 4
inline constexpr int kDiscardCounts = 272;   // 4 seats x 34: discarded tiles / 4
inline constexpr int kLastDiscard = 408;     // 34 one-hot
inline constexpr int kLastDiscarder = 442;   // 4 one-hot
inline constexpr int kLastDrawn = 446;       // 34 one-hot
inline constexpr int kHiddenKongs = 480;     // 4 seats: concealed kong count / 4
inline constexpr int kSeatWind = 484;        // 4 one-hot
inline constexpr int kPrevalentWind = 488;   // 4 one-hot
inline constexpr int kPhase = 492;           // 2 one-hot: discard, claim
inline constexpr int kWallRemaining = 494;   // remaining / 136
inline constexpr int kSize = 495;
}  // namespace features

// Stable 64-bit identifier of the feature layout and action enumeration.
std::uint64_t feature_layout_hash();

// One seat's view of the table. Contains nothing hidden from that seat: other
// seats' concealed kongs appear only as a count.
struct Observation {
  int seat = 0;
  Phase phase = Phase::AwaitDiscard;
  Wind seat_wind = Wind::East;
  Wind prevalent_wind = Wind::East;
  TileCounts hand{};
  std::array<std::vector<Meld>, kNumSeats> melds;      // relative seats
  std::array<int, kNumSeats> hidden_kongs{};           // others' concealed kongs
  std::array<std::vector<Tile>, kNumSeats> discards;   // relative seats, in order
  std::optional<Tile> last_discard;
  int last_discarder = 0;                              // relative seat
  std::optional<Tile> last_drawn;
  int wall_remaining = 0;
  LegalMask legal;

  // Tiles not visible to this seat (4 minus everything seen).
  TileCounts unseen() const;
  std::vector<float> encode() const;

  bool operator==(const Observation&) const = default;
};

// Observation for a seat owing a decision (legal mask filled). Throws
// NoPendingDecision otherwise.
Observation observe(const GameState& state, int seat);

// Compact form stored in training samples.
struct EncodedObservation {
  std::vector<float> features;
  LegalMask legal;
  bool operator==(const EncodedObservation&) const = default;
};

inline EncodedObservation encode(const Observation& obs) { return {obs.encode(), obs.legal}; }

}  // namespace mppo

#endif  // MPPO_OBSERVATION_HPP_
