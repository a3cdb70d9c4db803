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

#include "mppo/observation.hpp"

#include <string_view>

namespace mppo {

std::uint64_t feature_layout_hash() {
  constexpr std::string_view kLayout =
      "v1;hand4x34@0;melds4x34@136;discards4x34@272;last34@408;from4@442;drawn34@446;hkong4@480;"
      "swind4@484;pwind4@488;phase2@492;wall1@494;size495;actions41:d34,chowL,chowM,chowR,pung,kong,win,pass";
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : kLayout) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

TileCounts Observation::unseen() const {
  std::array<int, kNumTileKinds> seen{};
  for (int i = 0; i < kNumTileKinds; ++i) seen[i] += hand[i];
  for (int r = 0; r < kNumSeats; ++r) {
    for (const Meld& m : melds[r]) {
      for (Tile t : m.tiles()) ++seen[t.index()];
    }
    for (Tile t : discards[r]) ++seen[t.index()];
  }
  if (last_discard) ++seen[last_discard->index()];
  TileCounts out{};
  for (int i = 0; i < kNumTileKinds; ++i) {
    const int u = kCopiesPerKind - seen[i];
    out[i] = static_cast<std::uint8_t>(u > 0 ? u : 0);
  }
  return out;
}

std::vector<float> Observation::encode() const {
  using namespace features;
  std::vector<float> f(kSize, 0.0f);
  for (int i = 0; i < kNumTileKinds; ++i) {
    for (int plane = 0; plane < 4; ++plane) {
      if (hand[i] > plane) f[kHandPlanes + plane * kNumTileKinds + i] = 1.0f;
    }
  }
  for (int r = 0; r < kNumSeats; ++r) {
    for (const Meld& m : melds[r]) {
      for (Tile t : m.tiles()) f[kMeldCounts + r * kNumTileKinds + t.index()] += 0.25f;
    }
    for (Tile t : discards[r]) f[kDiscardCounts + r * kNumTileKinds + t.index()] += 0.25f;
    f[kHiddenKongs + r] = 0.25f * static_cast<float>(hidden_kongs[r]);
  }
  if (last_discard) {
    f[kLastDiscard + last_discard->index()] = 1.0f;
    f[kLastDiscarder + last_discarder] = 1.0f;
  }
  if (last_drawn) f[kLastDrawn + last_drawn->index()] = 1.0f;
  f[kSeatWind + static_cast<int>(seat_wind)] = 1.0f;
  f[kPrevalentWind + static_cast<int>(prevalent_wind)] = 1.0f;
  if (phase == Phase::AwaitDiscard) f[kPhase] = 1.0f;
  if (phase == Phase::AwaitClaims) f[kPhase + 1] = 1.0f;
  f[kWallRemaining] = static_cast<float>(wall_remaining) / static_cast<float>(kNumTiles);
  return f;
}

Observation observe(const GameState& s, int seat) {
  Observation o;
  o.legal = legal_actions(s, seat);
  o.seat = seat;
  o.phase = s.phase;
  o.seat_wind = s.seat_winds[seat];
  o.prevalent_wind = s.prevalent_wind;
  o.hand = s.seats[seat].hand;
  for (int r = 0; r < kNumSeats; ++r) {
    const SeatState& other = s.seats[(seat + r) % kNumSeats];
    for (const Meld& m : other.melds) {
      if (r != 0 && m.kind() == MeldKind::ConcealedKong) {
        ++o.hidden_kongs[r];
      } else {
        o.melds[r].push_back(m);
      }
    }
    o.discards[r] = other.discards;
  }
  if (s.last_discard) {
    o.last_discard = s.last_discard->tile;
    o.last_discarder = (s.last_discard->from - seat + kNumSeats) % kNumSeats;
  }
  if (s.phase == Phase::AwaitDiscard && seat == s.turn) o.last_drawn = s.last_drawn;
  o.wall_remaining = s.wall.remaining();
  return o;
}

}  // namespace mppo
