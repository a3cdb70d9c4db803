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

#include "mppo/scoring.hpp"

#include <algorithm>
#include <sstream>

namespace mppo {
namespace {

struct PatternInfo {
  Pattern pattern;
  std::string_view name;
  int points;
};

constexpr std::array<PatternInfo, kNumPatterns> kPatternTable = {{
    {Pattern::ThirteenOrphans, "ThirteenOrphans", 88},
    {Pattern::SevenPairs, "SevenPairs", 24},
    {Pattern::GreaterHonorsKnitted, "GreaterHonorsKnitted", 24},
    {Pattern::FullFlush, "FullFlush", 24},
    {Pattern::PureStraight, "PureStraight", 16},
    {Pattern::LesserHonorsKnitted, "LesserHonorsKnitted", 12},
    {Pattern::KnittedStraight, "KnittedStraight", 12},
    {Pattern::MixedStraight, "MixedStraight", 8},
    {Pattern::MixedTripleChow, "MixedTripleChow", 8},
    {Pattern::LastTile, "LastTile", 8},
    {Pattern::AllPungs, "AllPungs", 6},
    {Pattern::HalfFlush, "HalfFlush", 6},
    {Pattern::AllTypes, "AllTypes", 6},
    {Pattern::MeldedHand, "MeldedHand", 6},
    {Pattern::TwoDragonPungs, "TwoDragonPungs", 6},
    {Pattern::OutsideHand, "OutsideHand", 4},
    {Pattern::FullyConcealedHand, "FullyConcealedHand", 4},
    {Pattern::DragonPung, "DragonPung", 2},
    {Pattern::PrevalentWind, "PrevalentWind", 2},
    {Pattern::SeatWind, "SeatWind", 2},
    {Pattern::ConcealedHand, "ConcealedHand", 2},
    {Pattern::AllChows, "AllChows", 2},
    {Pattern::AllSimples, "AllSimples", 2},
    {Pattern::TileHog, "TileHog", 2},
    {Pattern::SelfDrawn, "SelfDrawn", 1},
}};

constexpr std::array<std::array<Suit, 3>, 6> kKnitPerms = {{
    {Suit::Characters, Suit::Bamboos, Suit::Dots},
    {Suit::Characters, Suit::Dots, Suit::Bamboos},
    {Suit::Bamboos, Suit::Characters, Suit::Dots},
    {Suit::Bamboos, Suit::Dots, Suit::Characters},
    {Suit::Dots, Suit::Characters, Suit::Bamboos},
    {Suit::Dots, Suit::Bamboos, Suit::Characters},
}};

// Indices of the nine knitted tiles for a suit assignment.
std::array<int, 9> knitted_tiles(const std::array<Suit, 3>& perm) {
  std::array<int, 9> out{};
  for (int run = 0; run < 3; ++run) {
    for (int k = 0; k < 3; ++k) {
      out[run * 3 + k] = static_cast<int>(perm[run]) * 9 + run + 3 * k;
    }
  }
  return out;
}

int meld_count_equiv(std::span<const Meld> exposed) { return static_cast<int>(exposed.size()) * 3; }

// Lowest-tile-first cover search. Emits every multiset of `need` sets that
// exactly covers `c`.
void cover_sets(TileCounts& c, int start, int need, std::vector<Meld>& current,
                std::vector<std::vector<Meld>>& out) {
  int i = start;
  while (i < kNumTileKinds && c[i] == 0) ++i;
  if (i == kNumTileKinds) {
    if (need == 0) out.push_back(current);
    return;
  }
  if (need == 0) return;
  if (c[i] >= 3) {
    c[i] -= 3;
    current.emplace_back(MeldKind::Pung, Tile::from_index(i));
    cover_sets(c, i, need - 1, current, out);
    current.pop_back();
    c[i] += 3;
  }
  const Tile t = Tile::from_index(i);
  if (t.is_suited() && t.rank() <= 7 && c[i + 1] > 0 && c[i + 2] > 0) {
    --c[i];
    --c[i + 1];
    --c[i + 2];
    current.emplace_back(MeldKind::Chow, t);
    cover_sets(c, i, need - 1, current, out);
    current.pop_back();
    ++c[i];
    ++c[i + 1];
    ++c[i + 2];
  }
}

// Pair + sets decompositions of `c` needing `need` sets.
void pair_and_sets(const TileCounts& c, int need, std::span<const Meld> exposed, SpecialShape shape,
                   const std::array<Suit, 3>& knit, std::vector<WinningDecomposition>& out) {
  for (int p = 0; p < kNumTileKinds; ++p) {
    if (c[p] < 2) continue;
    TileCounts rest = c;
    rest[p] -= 2;
    std::vector<std::vector<Meld>> covers;
    std::vector<Meld> current;
    cover_sets(rest, 0, need, current, covers);
    for (auto& sets : covers) {
      WinningDecomposition d;
      d.melds = std::move(sets);
      d.melds.insert(d.melds.end(), exposed.begin(), exposed.end());
      d.pair = Tile::from_index(p);
      d.special = shape;
      d.knit = knit;
      out.push_back(std::move(d));
    }
  }
}

bool has_exposed_only_concealed_kongs(std::span<const Meld> exposed) {
  return std::all_of(exposed.begin(), exposed.end(),
                     [](const Meld& m) { return m.kind() == MeldKind::ConcealedKong; });
}

}  // namespace

int pattern_points(Pattern p) { return kPatternTable[static_cast<int>(p)].points; }

std::string_view pattern_name(Pattern p) { return kPatternTable[static_cast<int>(p)].name; }

std::optional<Pattern> pattern_from_name(std::string_view name) {
  for (const auto& info : kPatternTable) {
    if (info.name == name) return info.pattern;
  }
  return std::nullopt;
}

bool is_major(Pattern p) { return pattern_points(p) >= 6; }

const std::vector<Pattern>& major_patterns() {
  static const std::vector<Pattern> kMajors = [] {
    std::vector<Pattern> v;
    for (const auto& info : kPatternTable) {
      if (info.points >= 6) v.push_back(info.pattern);
    }
    return v;
  }();
  return kMajors;
}

const std::vector<std::pair<Pattern, Pattern>>& pattern_exclusions() {
  static const std::vector<std::pair<Pattern, Pattern>> kExclusions = {
      {Pattern::ThirteenOrphans, Pattern::AllTypes},
      {Pattern::ThirteenOrphans, Pattern::ConcealedHand},
      {Pattern::ThirteenOrphans, Pattern::FullyConcealedHand},
      {Pattern::GreaterHonorsKnitted, Pattern::LesserHonorsKnitted},
      {Pattern::GreaterHonorsKnitted, Pattern::AllTypes},
      {Pattern::GreaterHonorsKnitted, Pattern::ConcealedHand},
      {Pattern::GreaterHonorsKnitted, Pattern::FullyConcealedHand},
      {Pattern::LesserHonorsKnitted, Pattern::AllTypes},
      {Pattern::LesserHonorsKnitted, Pattern::ConcealedHand},
      {Pattern::LesserHonorsKnitted, Pattern::FullyConcealedHand},
      {Pattern::SevenPairs, Pattern::ConcealedHand},
      {Pattern::FullFlush, Pattern::HalfFlush},
      {Pattern::TwoDragonPungs, Pattern::DragonPung},
      {Pattern::FullyConcealedHand, Pattern::SelfDrawn},
      {Pattern::LastTile, Pattern::SelfDrawn},
  };
  return kExclusions;
}

std::vector<WinningDecomposition> decompose(const TileCounts& concealed, std::span<const Meld> exposed) {
  std::vector<WinningDecomposition> out;
  if (exposed.size() > 4) return out;
  if (total_tiles(concealed) + meld_count_equiv(exposed) != 14) return out;

  const int need = 4 - static_cast<int>(exposed.size());
  pair_and_sets(concealed, need, exposed, SpecialShape::None, {}, out);

  if (exposed.empty()) {
    if (std::all_of(concealed.begin(), concealed.end(), [](auto c) { return c % 2 == 0; })) {
      WinningDecomposition d;
      d.special = SpecialShape::SevenPairs;
      for (int i = 0; i < kNumTileKinds; ++i) {
        for (int k = 0; k < concealed[i] / 2; ++k) d.pairs.push_back(Tile::from_index(i));
      }
      out.push_back(std::move(d));
    }

    bool orphans = true;
    int orphan_total = 0;
    for (int i = 0; i < kNumTileKinds; ++i) {
      const bool toh = Tile::from_index(i).is_terminal_or_honor();
      if (toh && concealed[i] == 0) orphans = false;
      if (!toh && concealed[i] != 0) orphans = false;
      if (toh) orphan_total += concealed[i];
    }
    if (orphans && orphan_total == 14) {
      WinningDecomposition d;
      d.special = SpecialShape::ThirteenOrphans;
      for (int i = 0; i < kNumTileKinds; ++i) {
        if (concealed[i] == 2) d.pair = Tile::from_index(i);
      }
      out.push_back(std::move(d));
    }
  }

  if (exposed.size() <= 1) {
    for (const auto& perm : kKnitPerms) {
      const auto knit = knitted_tiles(perm);
      TileCounts rest = concealed;
      bool ok = true;
      for (int idx : knit) {
        if (rest[idx] == 0) {
          ok = false;
          break;
        }
        --rest[idx];
      }
      if (!ok) continue;
      pair_and_sets(rest, 1 - static_cast<int>(exposed.size()), exposed, SpecialShape::KnittedStraight, perm, out);
    }
  }

  if (exposed.empty()) {
    const bool singles = std::all_of(concealed.begin(), concealed.end(), [](auto c) { return c <= 1; });
    if (singles) {
      for (const auto& perm : kKnitPerms) {
        const auto knit = knitted_tiles(perm);
        bool ok = true;
        for (int i = 0; i < 27; ++i) {
          if (concealed[i] && std::find(knit.begin(), knit.end(), i) == knit.end()) ok = false;
        }
        if (!ok) continue;
        WinningDecomposition d;
        d.special = SpecialShape::LesserKnitted;
        d.knit = perm;
        out.push_back(std::move(d));
      }
    }
  }
  return out;
}

bool is_winning_shape(const TileCounts& concealed, std::span<const Meld> exposed) {
  return !decompose(concealed, exposed).empty();
}

FanResult score_decomposition(const WinningDecomposition& d, const TileCounts& concealed,
                              std::span<const Meld> exposed, const WinContext& ctx) {
  TileCounts all = concealed;
  for (const Meld& m : exposed) m.add_to(all);

  std::vector<Pattern> hits;
  const bool gwp = d.special == SpecialShape::None;
  const bool set_based = gwp || d.special == SpecialShape::KnittedStraight;

  switch (d.special) {
    case SpecialShape::SevenPairs:
      hits.push_back(Pattern::SevenPairs);
      break;
    case SpecialShape::ThirteenOrphans:
      hits.push_back(Pattern::ThirteenOrphans);
      break;
    case SpecialShape::LesserKnitted: {
      bool all_honors = true;
      for (int i = 27; i < kNumTileKinds; ++i) all_honors = all_honors && all[i] == 1;
      hits.push_back(all_honors ? Pattern::GreaterHonorsKnitted : Pattern::LesserHonorsKnitted);
      bool full_knit = true;
      for (int idx : knitted_tiles(d.knit)) full_knit = full_knit && all[idx] == 1;
      if (full_knit) hits.push_back(Pattern::KnittedStraight);
      break;
    }
    case SpecialShape::KnittedStraight:
      hits.push_back(Pattern::KnittedStraight);
      break;
    case SpecialShape::None:
      break;
  }

  if (set_based) {
    int chows = 0;
    int pungs = 0;
    int dragon_pungs = 0;
    bool outside = d.pair && d.pair->is_terminal_or_honor();
    for (const Meld& m : d.melds) {
      if (m.is_chow()) {
        ++chows;
        outside = outside && (m.base().rank() == 1 || m.base().rank() == 7);
      } else {
        ++pungs;
        outside = outside && m.base().is_terminal_or_honor();
        if (m.base().is_dragon()) ++dragon_pungs;
        if (m.base() == Tile::wind(ctx.prevalent_wind)) hits.push_back(Pattern::PrevalentWind);
        if (m.base() == Tile::wind(ctx.seat_wind)) hits.push_back(Pattern::SeatWind);
      }
    }
    for (int k = 0; k < dragon_pungs; ++k) hits.push_back(Pattern::DragonPung);
    if (dragon_pungs >= 2) hits.push_back(Pattern::TwoDragonPungs);

    if (gwp) {
      if (chows == 4 && d.pair && d.pair->is_suited()) hits.push_back(Pattern::AllChows);
      if (pungs == 4) hits.push_back(Pattern::AllPungs);
      if (outside) hits.push_back(Pattern::OutsideHand);

      // chow_at[suit][rank-1]
      std::array<std::array<bool, 7>, 3> chow_at{};
      for (const Meld& m : d.melds) {
        if (m.is_chow()) chow_at[static_cast<int>(m.base().suit())][m.base().rank() - 1] = true;
      }
      for (int s = 0; s < 3; ++s) {
        if (chow_at[s][0] && chow_at[s][3] && chow_at[s][6]) hits.push_back(Pattern::PureStraight);
      }
      for (const auto& perm : kKnitPerms) {
        if (chow_at[static_cast<int>(perm[0])][0] && chow_at[static_cast<int>(perm[1])][3] &&
            chow_at[static_cast<int>(perm[2])][6]) {
          hits.push_back(Pattern::MixedStraight);
          break;
        }
      }
      for (int r = 0; r < 7; ++r) {
        if (chow_at[0][r] && chow_at[1][r] && chow_at[2][r]) {
          hits.push_back(Pattern::MixedTripleChow);
          break;
        }
      }
      if (exposed.size() == 4 && std::none_of(exposed.begin(), exposed.end(), [](const Meld& m) {
            return m.kind() == MeldKind::ConcealedKong;
          }) && !ctx.self_drawn) {
        hits.push_back(Pattern::MeldedHand);
      }
    }
  }

  // Whole-hand patterns.
  std::array<bool, 5> suit_present{};
  bool simples = true;
  for (int i = 0; i < kNumTileKinds; ++i) {
    if (all[i] == 0) continue;
    const Tile t = Tile::from_index(i);
    suit_present[static_cast<int>(t.suit())] = true;
    if (t.is_terminal_or_honor()) simples = false;
  }
  const int suited_kinds = suit_present[0] + suit_present[1] + suit_present[2];
  const bool honors = suit_present[3] || suit_present[4];
  if (suited_kinds == 1 && !honors) hits.push_back(Pattern::FullFlush);
  if (suited_kinds == 1 && honors) hits.push_back(Pattern::HalfFlush);
  if (std::all_of(suit_present.begin(), suit_present.end(), [](bool b) { return b; })) {
    hits.push_back(Pattern::AllTypes);
  }
  if (simples) hits.push_back(Pattern::AllSimples);

  for (int i = 0; i < kNumTileKinds; ++i) {
    if (all[i] != 4) continue;
    const bool is_kong = std::any_of(d.melds.begin(), d.melds.end(),
                                     [i](const Meld& m) { return m.is_kong() && m.base().index() == i; }) ||
                         std::any_of(exposed.begin(), exposed.end(),
                                     [i](const Meld& m) { return m.is_kong() && m.base().index() == i; });
    if (!is_kong) hits.push_back(Pattern::TileHog);
  }

  if (has_exposed_only_concealed_kongs(exposed)) {
    hits.push_back(ctx.self_drawn ? Pattern::FullyConcealedHand : Pattern::ConcealedHand);
  }
  if (ctx.self_drawn) hits.push_back(Pattern::SelfDrawn);
  if (ctx.last_tile) hits.push_back(Pattern::LastTile);

  for (const auto& [a, b] : pattern_exclusions()) {
    if (std::find(hits.begin(), hits.end(), a) != hits.end()) {
      hits.erase(std::remove(hits.begin(), hits.end(), b), hits.end());
    }
  }
  std::sort(hits.begin(), hits.end());

  FanResult r;
  r.shape = d.special;
  for (Pattern p : hits) {
    r.matched.emplace_back(p, pattern_points(p));
    r.total += pattern_points(p);
  }
  return r;
}

FanResult score(const TileCounts& concealed, std::span<const Meld> exposed, const WinContext& ctx) {
  const auto decomps = decompose(concealed, exposed);
  if (decomps.empty()) throw NotWinningHand("not a winning shape: " + counts_to_string(concealed));
  FanResult best;
  bool first = true;
  for (const auto& d : decomps) {
    FanResult r = score_decomposition(d, concealed, exposed, ctx);
    if (first || r.total > best.total) {
      best = std::move(r);
      first = false;
    }
  }
  return best;
}

bool can_declare_win(const TileCounts& concealed, std::span<const Meld> exposed, const WinContext& ctx) {
  if (decompose(concealed, exposed).empty()) return false;
  return score(concealed, exposed, ctx).total >= kMinWinPoints;
}

std::vector<Pattern> pattern_signature(const FanResult& result) {
  std::vector<Pattern> out;
  for (const auto& [p, pts] : result.matched) {
    if (is_major(p) && (out.empty() || out.back() != p)) out.push_back(p);
  }
  return out;
}

std::optional<Pattern> principal_pattern(const FanResult& result) {
  std::optional<Pattern> best;
  for (const auto& [p, pts] : result.matched) {
    if (is_major(p) && (!best || pattern_points(p) > pattern_points(*best))) best = p;
  }
  return best;
}

std::string_view shape_name(SpecialShape s) {
  switch (s) {
    case SpecialShape::None: return "GWP";
    case SpecialShape::SevenPairs: return "SevenPairs";
    case SpecialShape::ThirteenOrphans: return "ThirteenOrphans";
    case SpecialShape::KnittedStraight: return "KnittedStraight";
    case SpecialShape::LesserKnitted: return "LesserKnitted";
  }
  return "?";
}

std::string to_string(const FanResult& result) {
  std::ostringstream os;
  os << "{\"shape\":\"" << shape_name(result.shape) << "\",\"total\":" << result.total << ",\"patterns\":[";
  for (std::size_t i = 0; i < result.matched.size(); ++i) {
    if (i) os << ",";
    os << "{\"name\":\"" << pattern_name(result.matched[i].first) << "\",\"points\":" << result.matched[i].second
       << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace mppo
