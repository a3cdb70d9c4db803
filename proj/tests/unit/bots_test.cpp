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

#include "mppo/bots.hpp"
#include "mppo/game.hpp"
#include "mppo/metrics.hpp"
#include "mppo/shanten.hpp"

namespace mppo {
namespace {

Observation discard_obs(const std::string& tiles) {
  Observation o;
  o.phase = Phase::AwaitDiscard;
  o.hand = counts_of(parse_tiles(tiles));
  for (int t = 0; t < kNumTileKinds; ++t) {
    if (o.hand[t]) o.legal.set(t);
  }
  o.wall_remaining = 50;
  return o;
}

TEST(Bots, ForcedActionIsTaken) {
  Observation o = discard_obs("1C2C3C4C5C6C7C8C9C1B2B3B4B5B");
  o.legal.reset();
  o.legal.set(5);
  for (const auto& p : shipped_profiles()) EXPECT_EQ(bot_act(p, o), ActionId(5)) << p.name;
}

TEST(Bots, PairsSeekerKeepsPairs) {
  const BotProfile& p = profile_by_name("pairs");
  ASSERT_TRUE(p.keep_pairs);
  // six pairs plus two singles, several shuffles of which singles
  const std::vector<std::string> hands = {"1C1C3C3C5B5B7D7D9D9DWEWEDR2B", "2C2C4C4C6C6C8B8B1D1DWNWN3C9B",
                                          "WEWEWSWSWWWWWNWNDRDRDGDG1C9D", "1C1C2C2C3C3C4C4C5C5C6C6C7C8C"};
  for (const std::string& h : hands) {
    const Observation o = discard_obs(h);
    const ActionId a = bot_act(p, o);
    ASSERT_TRUE(a.is_discard()) << h;
    EXPECT_EQ(o.hand[a.value()], 1) << h << " discarded " << a.value();
  }
}

TEST(Bots, DeterministicAcrossCalls) {
  for (const auto& prof : shipped_profiles()) {
    ScriptedPlayer a(prof), b(prof), c(prof), d(prof);
    const GameRecord x = play_game(77, {&a, &b, &c, &d});
    const GameRecord y = play_game(77, {&a, &b, &c, &d});
    EXPECT_EQ(x.decisions, y.decisions) << prof.name;
  }
}

TEST(Bots, ChosenActionIsAlwaysLegal) {
  for (const auto& prof : shipped_profiles()) {
    ScriptedPlayer a(prof);
    RandomPlayer r1(1), r2(2), r3(3);
    for (std::uint64_t s = 0; s < 20; ++s) {
      play_game(s, {&a, &r1, &r2, &r3}, [&](const GameState&, const Observation& o, ActionId act) {
        ASSERT_TRUE(o.legal.test(act.value()));
      });
    }
  }
}

TEST(Bots, UnknownProfileThrows) { EXPECT_THROW(profile_by_name("nope"), std::invalid_argument); }

TEST(Bots, GoalDistanceAgreesWithShanten) {
  const TileCounts h = counts_of(parse_tiles("1C1C3C3C5B5B7D7D9D9DWEWEDR"));
  EXPECT_EQ(goal_distance({GoalFamily::SevenPairs, 0}, h, {}), shanten::seven_pairs(h));
  const TileCounts orph = counts_of(parse_tiles("1C9C1B9B1D9DWEWSWWWNDRDGDW"));
  EXPECT_EQ(goal_distance({GoalFamily::ThirteenOrphans, 0}, orph, {}), 0);
  const std::vector<Meld> pung = {Meld(MeldKind::Pung, Tile::from_index(0), 1)};
  EXPECT_FALSE(goal_distance({GoalFamily::SevenPairs, 0}, h, pung).has_value());
}

// Each profile wins at least 5% of 2000 games against three random-legal seats.
TEST(Bots, CompetenceFloor) {
  for (const auto& prof : shipped_profiles()) {
    ScriptedPlayer bot(prof);
    int wins = 0;
    const int games = 2000;
    for (int g = 0; g < games; ++g) {
      RandomPlayer r1(3 * g + 1), r2(3 * g + 2), r3(3 * g + 3);
      const int seat = g % kNumSeats;
      std::array<Player*, kNumSeats> players{};
      std::array<Player*, 3> rs{&r1, &r2, &r3};
      for (int s = 0, k = 0; s < kNumSeats; ++s) players[s] = s == seat ? static_cast<Player*>(&bot) : rs[k++];
      const GameRecord rec = play_game(500000 + g, players);
      if (rec.final_state.result && rec.final_state.result->winner == seat) ++wins;
    }
    EXPECT_GE(wins, games / 20) << prof.name << " won " << wins;
  }
}

TEST(Bots, ProfilesHaveDistinctStyles) {
  const auto seeds = seed_range(600000, 2000);
  const PatternDistribution bal = pattern_histogram(bot_factory(profile_by_name("balanced")), seeds, false, 4);
  const PatternDistribution prs = pattern_histogram(bot_factory(profile_by_name("pairs")), seeds, false, 4);
  EXPECT_GT(d_game(bal, prs), 0.1);
}

}  // namespace
}  // namespace mppo
