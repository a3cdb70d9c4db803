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

#include <gtest/gtest.h>

#include <algorithm>

#include "mppo/scoring.hpp"
#include "oracles.hpp"

namespace mppo {
namespace {

std::vector<Meld> melds(std::initializer_list<std::pair<MeldKind, const char*>> list) {
  std::vector<Meld> out;
  for (auto [k, t] : list) out.emplace_back(k, parse_tile(t), 1);
  return out;
}

bool has(const char* hand, const std::vector<Meld>& exposed, const WinContext& ctx, Pattern p) {
  try {
    const FanResult r = score(counts_of(parse_tiles(hand)), exposed, ctx);
    return std::any_of(r.matched.begin(), r.matched.end(), [&](auto m) { return m.first == p; });
  } catch (const NotWinningHand&) {
    return false;
  }
}

struct PatternFixture {
  Pattern pattern;
  const char* hit;
  const char* miss;
  std::vector<Meld> hit_melds = {};
  std::vector<Meld> miss_melds = {};
  WinContext hit_ctx = {};
  WinContext miss_ctx = {};
};

class PatternFixtures : public ::testing::TestWithParam<PatternFixture> {};

TEST_P(PatternFixtures, PositiveAndNearMiss) {
  const PatternFixture& f = GetParam();
  EXPECT_TRUE(has(f.hit, f.hit_melds, f.hit_ctx, f.pattern)) << pattern_name(f.pattern) << " " << f.hit;
  EXPECT_FALSE(has(f.miss, f.miss_melds, f.miss_ctx, f.pattern)) << pattern_name(f.pattern) << " " << f.miss;
}

WinContext self_drawn() {
  WinContext c;
  c.self_drawn = true;
  return c;
}
WinContext last_tile() {
  WinContext c;
  c.last_tile = true;
  return c;
}
WinContext winds(Wind seat, Wind prevalent) {
  WinContext c;
  c.seat_wind = seat;
  c.prevalent_wind = prevalent;
  return c;
}

const auto kExposed4 = melds({{MeldKind::Pung, "1C"}, {MeldKind::Chow, "4B"}, {MeldKind::Chow, "7D"}, {MeldKind::Pung, "WE"}});
const auto kExposed1 = melds({{MeldKind::Chow, "4B"}});

INSTANTIATE_TEST_SUITE_P(
    AllPatterns, PatternFixtures,
    ::testing::Values(
        PatternFixture{Pattern::ThirteenOrphans, "1C9C1B9B1D9DWEWSWWWNDRDGDW1C", "1C9C1B9B1D9DWEWSWWWNDRDGDW2C"},
        PatternFixture{Pattern::SevenPairs, "1C1C3C3C5B5B7B7B9D9DWSWSDGDG", "1C1C3C3C5B5B7B7B9D9DWSWSDGDR"},
        PatternFixture{Pattern::GreaterHonorsKnitted, "1C4C7C2B5B8B3DWEWSWWWNDRDGDW", "1C4C7C2B5B8B3D6DWEWSWWDRDGDW"},
        PatternFixture{Pattern::FullFlush, "1C2C3C4C5C6C7C8C9C1C2C3C5C5C", "1C2C3C4C5C6C7C8C9C1C2C3C5B5B"},
        PatternFixture{Pattern::PureStraight, "1C2C3C4C5C6C7C8C9C1C2C3C5C5C", "1C2C3C4C5C6C7B8B9B1C2C3C5C5C"},
        PatternFixture{Pattern::LesserHonorsKnitted, "1C4C7C2B5B8B3D6DWEWSWWDRDGDW", "1C4C7C2B5B8B3DWEWSWWWNDRDGDW"},
        PatternFixture{Pattern::KnittedStraight, "1C4C7C2B5B8B3D6D9DWEWEWEDRDR", "1C2C3C4B5B6B7D8D9DWEWEWEDRDR"},
        PatternFixture{Pattern::MixedStraight, "1C2C3C4B5B6B7D8D9DWEWEWEDRDR", "1C2C3C4B5B6B7B8B9BWEWEWEDRDR"},
        PatternFixture{Pattern::MixedTripleChow, "2C3C4C2B3B4B2D3D4DWEWEWEDRDR", "2C3C4C2B3B4B3D4D5DWEWEWEDRDR"},
        PatternFixture{Pattern::LastTile, "1C2C3C4B5B6B7D8D9DWEWEWEDRDR", "1C2C3C4B5B6B7D8D9DWEWEWEDRDR", {}, {},
                       last_tile(), {}},
        PatternFixture{Pattern::AllPungs, "1C1C1C5B5B5B9D9D9DWEWEWEDRDR", "1C2C3C5B5B5B9D9D9DWEWEWEDRDR"},
        PatternFixture{Pattern::HalfFlush, "1C2C3C4C5C6C7C7C7CWEWEWEDRDR", "1C2C3C4C5C6C7C7C7CWEWEWE5B5B"},
        PatternFixture{Pattern::AllTypes, "1C2C3C4B5B6B7D8D9DWEWEWEDRDR", "1C2C3C4B5B6B7D8D9DWEWEWEWSWS"},
        PatternFixture{Pattern::MeldedHand, "DRDR", "DRDR", kExposed4, kExposed4, {}, self_drawn()},
        PatternFixture{Pattern::TwoDragonPungs, "DRDRDRDGDGDG1C2C3C4B5B6B9D9D", "DRDRDRWEWEWE1C2C3C4B5B6B9D9D"},
        PatternFixture{Pattern::OutsideHand, "1C2C3C7B8B9B1D1D1DWEWEWE9C9C", "2C3C4C7B8B9B1D1D1DWEWEWE9C9C"},
        PatternFixture{Pattern::FullyConcealedHand, "1C2C3C4B5B6B7D8D9DWEWEWEDRDR", "1C2C3C4B5B6B7D8D9DWEWEWEDRDR", {}, {},
                       self_drawn(), {}},
        PatternFixture{Pattern::DragonPung, "DRDRDR1C2C3C4B5B6B7D8D9DWEWE", "WSWSWS1C2C3C4B5B6B7D8D9DDRDR"},
        PatternFixture{Pattern::PrevalentWind, "WEWEWE1C2C3C4B5B6B7D8D9DDRDR", "WEWEWE1C2C3C4B5B6B7D8D9DDRDR", {}, {},
                       winds(Wind::South, Wind::East), winds(Wind::South, Wind::South)},
        PatternFixture{Pattern::SeatWind, "WSWSWS1C2C3C4B5B6B7D8D9DDRDR", "WSWSWS1C2C3C4B5B6B7D8D9DDRDR", {}, {},
                       winds(Wind::South, Wind::East), winds(Wind::East, Wind::East)},
        PatternFixture{Pattern::ConcealedHand, "1C2C3C4B5B6B7D8D9DWEWEWEDRDR", "1C2C3C7D8D9DWEWEWEDRDR", {}, kExposed1},
        PatternFixture{Pattern::AllChows, "1C2C3C4C5C6C7C8C9C1C2C3C5C5C", "1C2C3C4C5C6C7C8C9C1C1C1C5C5C"},
        PatternFixture{Pattern::AllSimples, "2C3C4C3B4B5B6D7D8D5C5C5C8B8B", "2C3C4C3B4B5B6D7D8D5C5C5C9B9B"},
        PatternFixture{Pattern::TileHog, "1C2C3C3C3C3C4B5B6B7D8D9D9B9B", "1C2C3C5C5C5C4B5B6B7D8D9D9B9B"},
        PatternFixture{Pattern::SelfDrawn, "1C2C3C7D8D9DWEWEWEDRDR", "1C2C3C7D8D9DWEWEWEDRDR", kExposed1, kExposed1,
                       self_drawn(), {}}));

TEST(PatternTable, EveryPatternHasAFixture) {
  EXPECT_EQ(kNumPatterns, 25);
  for (int i = 0; i < kNumPatterns; ++i) {
    const auto p = static_cast<Pattern>(i);
    EXPECT_EQ(pattern_from_name(pattern_name(p)), p);
    EXPECT_EQ(is_major(p), pattern_points(p) >= 6);
  }
}

TEST(Decompose, SevenPairsFixture) {
  const auto d = decompose(counts_of(parse_tiles("2C2C3C3C4C4C6B6B7B7B9B9B1D1D")), {});
  EXPECT_TRUE(std::any_of(d.begin(), d.end(), [](auto& x) { return x.special == SpecialShape::SevenPairs; }));
}

TEST(Decompose, ThirteenOrphansWithAnyDuplicate) {
  const std::string base = "1C9C1B9B1D9DWEWSWWWNDRDGDW";
  for (const char* dup : {"1C", "9C", "1B", "9B", "1D", "9D", "WE", "WS", "WW", "WN", "DR", "DG", "DW"}) {
    const auto d = decompose(counts_of(parse_tiles(base + dup)), {});
    ASSERT_EQ(d.size(), 1u) << dup;
    EXPECT_EQ(d[0].special, SpecialShape::ThirteenOrphans);
    EXPECT_EQ(d[0].pair, parse_tile(dup));
  }
}

TEST(Decompose, MatchesOracleOnAmbiguousHands) {
  for (const char* h : {"1C1C1C2C2C2C3C3C3C4C4C4C5C5C", "1C1C2C2C3C3C4C4C5C5C6C6C7C7C", "2B2B2B3B3B3B4B4B4B5B5B6B7B8B"}) {
    const TileCounts c = counts_of(parse_tiles(h));
    EXPECT_EQ(oracle::canonical(decompose(c, {}), 0), oracle::decompositions(c, {})) << h;
    EXPECT_GT(decompose(c, {}).size(), 1u) << h;
  }
}

TEST(Decompose, RandomNonWinningHandIsEmpty) {
  EXPECT_TRUE(decompose(counts_of(parse_tiles("1C3C5C7C9C2B4B6B8B1D4D7DWEDR")), {}).empty());
  EXPECT_THROW(score(counts_of(parse_tiles("1C3C5C7C9C2B4B6B8B1D4D7DWEDR")), {}, {}), NotWinningHand);
}

TEST(Decompose, WrongTileCountIsEmpty) {
  EXPECT_TRUE(decompose(counts_of(parse_tiles("1C1C")), {}).empty());
}

TEST(Score, PureOneSuitChowHandChecklist) {
  // FullFlush 24 + PureStraight 16 + AllChows 2 + ConcealedHand 2; no honors,
  // not all simples, no hog, no terminal in every set.
  const FanResult r = score(counts_of(parse_tiles("1C2C3C4C5C6C7C8C9C1C2C3C5C5C")), {}, {});
  EXPECT_EQ(r.total, 44);
  EXPECT_TRUE(can_declare_win(counts_of(parse_tiles("1C2C3C4C5C6C7C8C9C1C2C3C5C5C")), {}, {}));
}

TEST(Score, SevenPairsAtLeast24) {
  const FanResult r = score(counts_of(parse_tiles("2C2C3C3C4C4C6B6B7B7B9B9B1D1D")), {}, {});
  EXPECT_GE(r.total, 24);
  EXPECT_EQ(r.shape, SpecialShape::SevenPairs);
}

TEST(Score, PlainMixedHandBelowEight) {
  const TileCounts c = counts_of(parse_tiles("2C3C4C5B6B7B3D4D5D6C7C8C9B9B"));
  const FanResult r = score(c, {}, {});
  EXPECT_LT(r.total, kMinWinPoints);
  EXPECT_FALSE(can_declare_win(c, {}, {}));
}

TEST(Score, ExclusionsNeverCoexist) {
  const char* hands[] = {"1C9C1B9B1D9DWEWSWWWNDRDGDW1C", "1C4C7C2B5B8B3DWEWSWWWNDRDGDW",
                         "DRDRDRDGDGDG1C2C3C4B5B6B9D9D", "1C2C3C4C5C6C7C8C9C1C2C3C5C5C"};
  for (const char* h : hands) {
    for (bool sd : {false, true}) {
      WinContext ctx;
      ctx.self_drawn = sd;
      const FanResult r = score(counts_of(parse_tiles(h)), {}, ctx);
      for (const auto& [a, b] : pattern_exclusions()) {
        const bool ha = std::any_of(r.matched.begin(), r.matched.end(), [&](auto m) { return m.first == a; });
        const bool hb = std::any_of(r.matched.begin(), r.matched.end(), [&](auto m) { return m.first == b; });
        EXPECT_FALSE(ha && hb) << h;
      }
      int sum = 0;
      for (auto [p, pts] : r.matched) sum += pts;
      EXPECT_EQ(sum, r.total);
    }
  }
}

TEST(PatternSignature, Projection) {
  FanResult r;
  r.matched = {{Pattern::SevenPairs, 24}};
  EXPECT_EQ(pattern_signature(r), std::vector<Pattern>{Pattern::SevenPairs});
  r.matched = {{Pattern::MeldedHand, 6}, {Pattern::AllChows, 2}};
  EXPECT_EQ(pattern_signature(r), std::vector<Pattern>{Pattern::MeldedHand});
  r.matched = {};
  EXPECT_TRUE(pattern_signature(r).empty());
  EXPECT_FALSE(principal_pattern(r).has_value());
}

TEST(PatternSignature, PrincipalIsHighestValue) {
  FanResult r;
  r.matched = {{Pattern::FullFlush, 24}, {Pattern::PureStraight, 16}, {Pattern::AllChows, 2}};
  EXPECT_EQ(principal_pattern(r), Pattern::FullFlush);
}

}  // namespace
}  // namespace mppo
