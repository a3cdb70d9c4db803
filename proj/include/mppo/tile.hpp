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

#ifndef MPPO_TILE_HPP_
#define MPPO_TILE_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mppo {

inline constexpr int kNumTileKinds = 34;
inline constexpr int kCopiesPerKind = 4;
inline constexpr int kNumTiles = kNumTileKinds * kCopiesPerKind;  // 136
inline constexpr int kNumSeats = 4;

enum class Suit : std::uint8_t { Characters, Bamboos, Dots, Winds, Dragons };

enum class Wind : std::uint8_t { East, South, West, North };

// A tile kind. The index is the canonical total order:
//   0..8   1C..9C
//   9..17  1B..9B
//   18..26 1D..9D
//   27..30 WE WS WW WN
//   31..33 DR DG DW
class Tile {
 public:
  constexpr Tile() = default;

  static constexpr Tile from_index(int index) { return Tile(static_cast<std::uint8_t>(index)); }
  // Throws std::invalid_argument when rank is out of range for the suit.
  static Tile make(Suit suit, int rank);
  static constexpr Tile wind(Wind w) { return Tile(static_cast<std::uint8_t>(27 + static_cast<int>(w))); }

  constexpr int index() const { return index_; }
  constexpr Suit suit() const {
    if (index_ < 9) return Suit::Characters;
    if (index_ < 18) return Suit::Bamboos;
    if (index_ < 27) return Suit::Dots;
    if (index_ < 31) return Suit::Winds;
    return Suit::Dragons;
  }
  // 1..9 for suited tiles, 1..4 for winds, 1..3 for dragons.
  constexpr int rank() const {
    if (index_ < 27) return index_ % 9 + 1;
    if (index_ < 31) return index_ - 26;
    return index_ - 30;
  }
  constexpr bool is_suited() const { return index_ < 27; }
  constexpr bool is_honor() const { return index_ >= 27; }
  constexpr bool is_terminal() const { return is_suited() && (rank() == 1 || rank() == 9); }
  constexpr bool is_terminal_or_honor() const { return is_honor() || is_terminal(); }
  constexpr bool is_dragon() const { return index_ >= 31; }
  constexpr bool is_wind() const { return index_ >= 27 && index_ < 31; }

  // Notation: 1C..9C, 1B..9B, 1D..9D, WE/WS/WW/WN, DR/DG/DW.
  std::string to_string() const;

  constexpr auto operator<=>(const Tile&) const = default;

 private:
  constexpr explicit Tile(std::uint8_t index) : index_(index) {}
  std::uint8_t index_ = 0;
};

// Throws std::invalid_argument on unknown notation.
Tile parse_tile(std::string_view text);
// Parses a run of two-character tiles such as "2C2C3C" (whitespace ignored).
std::vector<Tile> parse_tiles(std::string_view text);
std::string tiles_to_string(const std::vector<Tile>& tiles);

// Per-kind tile counts; the canonical representation of a tile multiset.
using TileCounts = std::array<std::uint8_t, kNumTileKinds>;

TileCounts counts_of(const std::vector<Tile>& tiles);
std::vector<Tile> tiles_of(const TileCounts& counts);
int total_tiles(const TileCounts& counts);
std::string counts_to_string(const TileCounts& counts);

enum class MeldKind : std::uint8_t { Chow, Pung, ExposedKong, ConcealedKong };

// A Chow is identified by its lowest tile.
class Meld {
 public:
  // Throws std::invalid_argument for ill-formed groups (honor chows, chows
  // running past 9).
  Meld(MeldKind kind, Tile base, std::optional<int> claimed_from = std::nullopt);

  MeldKind kind() const { return kind_; }
  Tile base() const { return base_; }
  std::optional<int> claimed_from() const { return claimed_from_; }

  bool is_chow() const { return kind_ == MeldKind::Chow; }
  bool is_pung_or_kong() const { return kind_ != MeldKind::Chow; }
  bool is_kong() const { return kind_ == MeldKind::ExposedKong || kind_ == MeldKind::ConcealedKong; }
  int tile_count() const { return is_kong() ? 4 : 3; }
  // Tiles in order (a kong lists its tile four times).
  std::vector<Tile> tiles() const;
  void add_to(TileCounts& counts) const;
  std::string to_string() const;

  bool operator==(const Meld&) const = default;

 private:
  MeldKind kind_;
  Tile base_;
  std::optional<int> claimed_from_;
};

// Every chow containing `claimed` that can be completed with two tiles from
// `hand`, ordered by base tile. Empty for honors.
std::vector<Meld> enumerate_chows(const TileCounts& hand, Tile claimed);

// The 136-tile wall. Tiles are drawn from the front; kong replacements come
// from the back.
struct Wall {
  std::array<Tile, kNumTiles> tiles{};
  int draw_cursor = 0;   // next front index
  int tail_drawn = 0;    // tiles taken from the back

  int remaining() const { return kNumTiles - draw_cursor - tail_drawn; }
  Tile draw_front();
  Tile draw_back();

  bool operator==(const Wall&) const = default;
};

// Deterministic shuffle of the full tile set: std::mt19937_64 seeded with
// `seed`, bounded integers by rejection sampling, Fisher-Yates from the top.
Wall shuffle_wall(std::uint64_t seed);

}  // namespace mppo

#endif  // MPPO_TILE_HPP_
