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

#include "mppo/tile.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "mppo/rng.hpp"

namespace mppo {

double standard_normal(Rng& rng) {
  double u1 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

constexpr const char* kHonorNames[] = {"WE", "WS", "WW", "WN", "DR", "DG", "DW"};

}  // namespace

Tile Tile::make(Suit suit, int rank) {
  switch (suit) {
    case Suit::Characters:
    case Suit::Bamboos:
    case Suit::Dots:
      if (rank < 1 || rank > 9) throw std::invalid_argument("suited rank out of range");
      return Tile(static_cast<std::uint8_t>(static_cast<int>(suit) * 9 + rank - 1));
    case Suit::Winds:
      if (rank < 1 || rank > 4) throw std::invalid_argument("wind rank out of range");
      return Tile(static_cast<std::uint8_t>(26 + rank));
    case Suit::Dragons:
      if (rank < 1 || rank > 3) throw std::invalid_argument("dragon rank out of range");
      return Tile(static_cast<std::uint8_t>(30 + rank));
  }
  throw std::invalid_argument("unknown suit");
}

std::string Tile::to_string() const {
  if (is_honor()) return kHonorNames[index_ - 27];
  static constexpr char kSuitLetters[] = {'C', 'B', 'D'};
  return std::string{static_cast<char>('0' + rank()), kSuitLetters[index_ / 9]};
}

Tile parse_tile(std::string_view text) {
  if (text.size() != 2) throw std::invalid_argument("bad tile: '" + std::string(text) + "'");
  const char a = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  const char b = static_cast<char>(std::toupper(static_cast<unsigned char>(text[1])));
  if (a >= '1' && a <= '9') {
    switch (b) {
      case 'C': return Tile::make(Suit::Characters, a - '0');
      case 'B': return Tile::make(Suit::Bamboos, a - '0');
      case 'D': return Tile::make(Suit::Dots, a - '0');
      default: break;
    }
  }
  for (int i = 0; i < 7; ++i) {
    if (a == kHonorNames[i][0] && b == kHonorNames[i][1]) return Tile::from_index(27 + i);
  }
  throw std::invalid_argument("bad tile: '" + std::string(text) + "'");
}

std::vector<Tile> parse_tiles(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != ',') compact.push_back(c);
  }
  if (compact.size() % 2 != 0) throw std::invalid_argument("odd-length tile string");
  std::vector<Tile> out;
  for (std::size_t i = 0; i < compact.size(); i += 2) {
    out.push_back(parse_tile(std::string_view(compact).substr(i, 2)));
  }
  return out;
}

std::string tiles_to_string(const std::vector<Tile>& tiles) {
  std::string s;
  for (Tile t : tiles) s += t.to_string();
  return s;
}

TileCounts counts_of(const std::vector<Tile>& tiles) {
  TileCounts c{};
  for (Tile t : tiles) ++c[t.index()];
  return c;
}

std::vector<Tile> tiles_of(const TileCounts& counts) {
  std::vector<Tile> out;
  for (int i = 0; i < kNumTileKinds; ++i) {
    for (int k = 0; k < counts[i]; ++k) out.push_back(Tile::from_index(i));
  }
  return out;
}

int total_tiles(const TileCounts& counts) {
  int n = 0;
  for (auto c : counts) n += c;
  return n;
}

std::string counts_to_string(const TileCounts& counts) { return tiles_to_string(tiles_of(counts)); }

Meld::Meld(MeldKind kind, Tile base, std::optional<int> claimed_from)
    : kind_(kind), base_(base), claimed_from_(claimed_from) {
  if (kind == MeldKind::Chow) {
    if (!base.is_suited()) throw std::invalid_argument("chow over honor tile " + base.to_string());
    if (base.rank() > 7) throw std::invalid_argument("chow base " + base.to_string() + " runs past 9");
  }
  if (claimed_from && (*claimed_from < 0 || *claimed_from >= kNumSeats)) {
    throw std::invalid_argument("claimed_from seat out of range");
  }
  if (kind == MeldKind::ConcealedKong && claimed_from) {
    throw std::invalid_argument("concealed kong cannot be claimed");
  }
}

std::vector<Tile> Meld::tiles() const {
  if (is_chow()) {
    return {base_, Tile::from_index(base_.index() + 1), Tile::from_index(base_.index() + 2)};
  }
  return std::vector<Tile>(static_cast<std::size_t>(tile_count()), base_);
}

void Meld::add_to(TileCounts& counts) const {
  if (is_chow()) {
    for (int k = 0; k < 3; ++k) ++counts[base_.index() + k];
  } else {
    counts[base_.index()] = static_cast<std::uint8_t>(counts[base_.index()] + tile_count());
  }
}

std::string Meld::to_string() const {
  static constexpr const char* kNames[] = {"chow", "pung", "kong", "ckong"};
  return std::string(kNames[static_cast<int>(kind_)]) + ":" + tiles_to_string(tiles());
}

std::vector<Meld> enumerate_chows(const TileCounts& hand, Tile claimed) {
  std::vector<Meld> out;
  if (!claimed.is_suited()) return out;
  const int r = claimed.rank();
  const int idx = claimed.index();
  // Base offsets: claimed is lowest, middle or highest.
  for (int offset = 2; offset >= 0; --offset) {
    const int base_rank = r - offset;
    if (base_rank < 1 || base_rank > 7) continue;
    const int base = idx - offset;
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
      if (base + k == idx) continue;
      if (hand[base + k] == 0) ok = false;
    }
    if (ok) out.emplace_back(MeldKind::Chow, Tile::from_index(base));
  }
  return out;
}

Tile Wall::draw_front() {
  if (remaining() <= 0) throw std::logic_error("draw from empty wall");
  return tiles[draw_cursor++];
}

Tile Wall::draw_back() {
  if (remaining() <= 0) throw std::logic_error("draw from empty wall");
  ++tail_drawn;
  return tiles[kNumTiles - tail_drawn];
}

Wall shuffle_wall(std::uint64_t seed) {
  Wall wall;
  for (int i = 0; i < kNumTiles; ++i) wall.tiles[i] = Tile::from_index(i / kCopiesPerKind);
  Rng rng(seed);
  for (int i = kNumTiles - 1; i > 0; --i) {
    const auto j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(wall.tiles[i], wall.tiles[j]);
  }
  return wall;
}

}  // namespace mppo
