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

#ifndef MPPO_SCORING_HPP_
#define MPPO_SCORING_HPP_

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mppo/tile.hpp"

namespace mppo {

// The implemented 25-pattern subset of the MCR fan table. Enumeration order
// is by descending value and is frozen: it is the index space of pattern
// histograms and of the D_game event list.
enum class Pattern : std::uint8_t {
  ThirteenOrphans,       // 88
  SevenPairs,            // 24
  GreaterHonorsKnitted,  // 24
  FullFlush,             // 24
  PureStraight,          // 16
  LesserHonorsKnitted,   // 12
  KnittedStraight,       // 12
  MixedStraight,         // 8
  MixedTripleChow,       // 8
  LastTile,              // 8
  AllPungs,              // 6
  HalfFlush,             // 6
  AllTypes,              // 6
  MeldedHand,            // 6
  TwoDragonPungs,        // 6
  OutsideHand,           // 4
  FullyConcealedHand,    // 4
  DragonPung,            // 2
  PrevalentWind,         // 2
  SeatWind,              // 2
  ConcealedHand,         // 2
  AllChows,              // 2
  AllSimples,            // 2
  TileHog,               // 2
  SelfDrawn,             // 1
};

inline constexpr int kNumPatterns = 25;
inline constexpr int kMinWinPoints = 8;

int pattern_points(Pattern p);
std::string_view pattern_name(Pattern p);
std::optional<Pattern> pattern_from_name(std::string_view name);

// Major patterns: implemented patterns worth at least 6 points. This stands in
// for MCR's 56-entry major list and is the event space of D_game.
bool is_major(Pattern p);
const std::vector<Pattern>& major_patterns();

// (A, B): when A is matched, every B entry is dropped.
const std::vector<std::pair<Pattern, Pattern>>& pattern_exclusions();

enum class SpecialShape : std::uint8_t { None, SevenPairs, ThirteenOrphans, KnittedStraight, LesserKnitted };

struct WinningDecomposition {
  // Sets from the concealed part followed by the exposed melds, in that order.
  // GWP: 4 sets. KnittedStraight: 1 set. Other specials: none.
  std::vector<Meld> melds;
  std::optional<Tile> pair;
  SpecialShape special = SpecialShape::None;
  // SevenPairs: the seven pair tiles (a tile held four times appears twice).
  std::vector<Tile> pairs;
  // Knitted shapes: suits assigned to the 147 / 258 / 369 runs.
  std::array<Suit, 3> knit{};

  bool operator==(const WinningDecomposition&) const = default;
};

struct WinContext {
  bool self_drawn = false;
  bool last_tile = false;  // won on the last wall tile or on the discard after it
  Wind seat_wind = Wind::East;
  Wind prevalent_wind = Wind::East;
};

struct FanResult {
  std::vector<std::pair<Pattern, int>> matched;  // sorted by Pattern
  int total = 0;
  SpecialShape shape = SpecialShape::None;

  bool operator==(const FanResult&) const = default;
};

class NotWinningHand : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Every winning decomposition of `concealed` (including the winning tile)
// together with the exposed melds. Requires total(concealed) + 3*|exposed|
// == 14; otherwise returns an empty list.
std::vector<WinningDecomposition> decompose(const TileCounts& concealed, std::span<const Meld> exposed);

bool is_winning_shape(const TileCounts& concealed, std::span<const Meld> exposed);

// Fan of a single decomposition after exclusions.
FanResult score_decomposition(const WinningDecomposition& d, const TileCounts& concealed,
                              std::span<const Meld> exposed, const WinContext& ctx);

// Maximum over all decompositions. Throws NotWinningHand when decompose() is
// empty.
FanResult score(const TileCounts& concealed, std::span<const Meld> exposed, const WinContext& ctx);

// decompose() non-empty and best total >= 8.
bool can_declare_win(const TileCounts& concealed, std::span<const Meld> exposed, const WinContext& ctx);

// Major patterns matched by a result, ascending and de-duplicated.
std::vector<Pattern> pattern_signature(const FanResult& result);

// The single highest-value major pattern, if any.
std::optional<Pattern> principal_pattern(const FanResult& result);

std::string to_string(const FanResult& result);
std::string_view shape_name(SpecialShape s);

}  // namespace mppo

#endif  // MPPO_SCORING_HPP_
