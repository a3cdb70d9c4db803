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

#include "mppo/bots.hpp"

#include <algorithm>
#include <stdexcept>

#include "mppo/shanten.hpp"

namespace mppo {
namespace {

constexpr std::array<std::array<int, 3>, 6> kSuitPerms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

int family_index(GoalFamily f) { return static_cast<int>(f); }

// Distance to a hand built from fixed chows plus (4 - |chows|) free sets and a pair.
std::optional<int> fixed_chow_distance(const std::array<int, 3>& chow_bases, const TileCounts& concealed,
                                       std::span<const Meld> exposed) {
  std::array<bool, 3> matched{};
  int free_exposed = 0;
  for (const Meld& m : exposed) {
    bool used = false;
    if (m.is_chow()) {
      for (int k = 0; k < 3; ++k) {
        if (!matched[k] && chow_bases[k] == m.base().index()) {
          matched[k] = true;
          used = true;
          break;
        }
      }
    }
    if (!used) ++free_exposed;
  }
  if (free_exposed > 1) return std::nullopt;
  TileCounts need{};
  for (int k = 0; k < 3; ++k) {
    if (matched[k]) continue;
    for (int j = 0; j < 3; ++j) ++need[chow_bases[k] + j];
  }
  int missing = 0;
  TileCounts rest = concealed;
  for (int i = 0; i < kNumTileKinds; ++i) {
    const int used = std::min<int>(need[i], rest[i]);
    missing += need[i] - used;
    rest[i] = static_cast<std::uint8_t>(rest[i] - used);
  }
  return missing + shanten::normal(rest, 1 - free_exposed);
}

std::array<int, 9> knit_indices(int perm) {
  std::array<int, 9> out{};
  for (int run = 0; run < 3; ++run) {
    for (int k = 0; k < 3; ++k) out[run * 3 + k] = kSuitPerms[perm][run] * 9 + run + 3 * k;
  }
  return out;
}

bool exposed_in_suit(std::span<const Meld> exposed, int suit, bool allow_honors) {
  return std::all_of(exposed.begin(), exposed.end(), [&](const Meld& m) {
    const Tile t = m.base();
    if (t.is_honor()) return allow_honors;
    return static_cast<int>(t.suit()) == suit;
  });
}

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) {
    h ^= (v >> (8 * k)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Candidate {
  ActionId action;
  double score;
  int ukeire;
};

int ukeire(const Goal& goal, const TileCounts& concealed, std::span<const Meld> exposed, const TileCounts& unseen) {
  const auto base = goal_distance(goal, concealed, exposed);
  if (!base) return 0;
  int total = 0;
  TileCounts probe = concealed;
  for (int i = 0; i < kNumTileKinds; ++i) {
    if (unseen[i] == 0 || probe[i] >= 4) continue;
    ++probe[i];
    const auto d = goal_distance(goal, probe, exposed);
    if (d && *d < *base) total += unseen[i];
    --probe[i];
  }
  return total;
}

ActionId pick(const std::vector<Candidate>& cands, const BotProfile& profile, const Observation& obs) {
  double best = 1e18;
  for (const auto& c : cands) best = std::min(best, c.score);
  int best_uke = -1;
  for (const auto& c : cands) {
    if (c.score <= best + 1e-9) best_uke = std::max(best_uke, c.ukeire);
  }
  std::vector<ActionId> ties;
  for (const auto& c : cands) {
    if (c.score <= best + 1e-9 && c.ukeire == best_uke) ties.push_back(c.action);
  }
  if (ties.size() == 1) return ties.front();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv(h, profile.tie_break_seed);
  for (int i = 0; i < kNumTileKinds; ++i) h = fnv(h, obs.hand[i]);
  h = fnv(h, static_cast<std::uint64_t>(obs.wall_remaining));
  h = fnv(h, static_cast<std::uint64_t>(obs.seat));
  return ties[h % ties.size()];
}

struct KongPlan {
  TileCounts hand;
  std::vector<Meld> melds;
};

KongPlan apply_own_kong(const TileCounts& hand, const std::vector<Meld>& melds) {
  KongPlan p{hand, melds};
  for (int i = 0; i < kNumTileKinds; ++i) {
    if (hand[i] == 4) {
      p.hand[i] = 0;
      p.melds.emplace_back(MeldKind::ConcealedKong, Tile::from_index(i));
      return p;
    }
  }
  std::optional<int> target;
  for (const Meld& m : melds) {
    if (m.kind() == MeldKind::Pung && hand[m.base().index()] > 0) {
      if (!target || m.base().index() < *target) target = m.base().index();
    }
  }
  if (target) {
    --p.hand[*target];
    for (Meld& m : p.melds) {
      if (m.kind() == MeldKind::Pung && m.base().index() == *target) m = Meld(MeldKind::ExposedKong, m.base());
    }
  }
  return p;
}

double best_discard_score(const BotProfile& profile, TileCounts hand, std::span<const Meld> exposed) {
  double best = 1e18;
  for (int i = 0; i < kNumTileKinds; ++i) {
    if (hand[i] == 0) continue;
    --hand[i];
    best = std::min(best, evaluate_hand(profile, hand, exposed).score);
    ++hand[i];
  }
  return best;
}

}  // namespace

const std::vector<Goal>& all_goals() {
  static const std::vector<Goal> kGoals = [] {
    std::vector<Goal> g;
    g.push_back({GoalFamily::Plain, 0});
    for (int s = 0; s < 3; ++s) g.push_back({GoalFamily::HalfFlush, s});
    for (int s = 0; s < 3; ++s) g.push_back({GoalFamily::FullFlush, s});
    g.push_back({GoalFamily::AllPungs, 0});
    for (int p = 0; p < 6; ++p) g.push_back({GoalFamily::MixedStraight, p});
    for (int s = 0; s < 3; ++s) g.push_back({GoalFamily::PureStraight, s});
    for (int r = 0; r < 7; ++r) g.push_back({GoalFamily::MixedTripleChow, r});
    g.push_back({GoalFamily::AllTypes, 0});
    g.push_back({GoalFamily::SevenPairs, 0});
    g.push_back({GoalFamily::ThirteenOrphans, 0});
    for (int p = 0; p < 6; ++p) g.push_back({GoalFamily::KnittedStraight, p});
    for (int p = 0; p < 6; ++p) g.push_back({GoalFamily::HonorsKnitted, p});
    return g;
  }();
  return kGoals;
}

std::optional<int> goal_distance(const Goal& goal, const TileCounts& concealed, std::span<const Meld> exposed) {
  const int sets_needed = 4 - static_cast<int>(exposed.size());
  switch (goal.family) {
    case GoalFamily::Plain:
      return shanten::normal(concealed, sets_needed);
    case GoalFamily::HalfFlush:
    case GoalFamily::FullFlush: {
      const bool half = goal.family == GoalFamily::HalfFlush;
      if (!exposed_in_suit(exposed, goal.param, half)) return std::nullopt;
      TileCounts filtered{};
      for (int i = 0; i < kNumTileKinds; ++i) {
        const Tile t = Tile::from_index(i);
        if ((t.is_suited() && static_cast<int>(t.suit()) == goal.param) || (half && t.is_honor())) {
          filtered[i] = concealed[i];
        }
      }
      return shanten::normal(filtered, sets_needed);
    }
    case GoalFamily::AllPungs: {
      int pungs = 0;
      int pairs = 0;
      for (const Meld& m : exposed) {
        if (m.is_chow()) return std::nullopt;
        ++pungs;
      }
      for (auto c : concealed) {
        if (c >= 3) ++pungs;
        if (c == 2) ++pairs;
      }
      pungs = std::min(pungs, 4);
      return 8 - 2 * pungs - std::min(pairs, 5 - pungs);
    }
    case GoalFamily::MixedStraight: {
      const auto& perm = kSuitPerms[goal.param];
      return fixed_chow_distance({perm[0] * 9 + 0, perm[1] * 9 + 3, perm[2] * 9 + 6}, concealed, exposed);
    }
    case GoalFamily::PureStraight: {
      const int s = goal.param * 9;
      return fixed_chow_distance({s + 0, s + 3, s + 6}, concealed, exposed);
    }
    case GoalFamily::MixedTripleChow: {
      const int r = goal.param;
      return fixed_chow_distance({r, 9 + r, 18 + r}, concealed, exposed);
    }
    case GoalFamily::AllTypes: {
      std::array<bool, 5> present{};
      for (int i = 0; i < kNumTileKinds; ++i) {
        if (concealed[i]) present[static_cast<int>(Tile::from_index(i).suit())] = true;
      }
      for (const Meld& m : exposed) present[static_cast<int>(m.base().suit())] = true;
      const int missing = static_cast<int>(std::count(present.begin(), present.end(), false));
      return shanten::normal(concealed, sets_needed) + missing;
    }
    case GoalFamily::SevenPairs:
      if (!exposed.empty()) return std::nullopt;
      return shanten::seven_pairs(concealed);
    case GoalFamily::ThirteenOrphans:
      if (!exposed.empty()) return std::nullopt;
      return shanten::thirteen_orphans(concealed);
    case GoalFamily::KnittedStraight: {
      if (exposed.size() > 1) return std::nullopt;
      TileCounts rest = concealed;
      int missing = 0;
      for (int idx : knit_indices(goal.param)) {
        if (rest[idx]) {
          --rest[idx];
        } else {
          ++missing;
        }
      }
      return missing + shanten::normal(rest, 1 - static_cast<int>(exposed.size()));
    }
    case GoalFamily::HonorsKnitted: {
      if (!exposed.empty()) return std::nullopt;
      const auto knit = knit_indices(goal.param);
      int distinct = 0;
      for (int idx : knit) distinct += concealed[idx] ? 1 : 0;
      for (int i = 27; i < kNumTileKinds; ++i) distinct += concealed[i] ? 1 : 0;
      return 13 - std::min(distinct, 14);
    }
  }
  return std::nullopt;
}

HandValue evaluate_hand(const BotProfile& profile, const TileCounts& concealed, std::span<const Meld> exposed) {
  HandValue best;
  for (const Goal& g : all_goals()) {
    const double w = profile.style_weights[family_index(g.family)];
    const auto d = goal_distance(g, concealed, exposed);
    if (!d) continue;
    const double s = *d - w;
    if (s < best.score) best = {s, g};
  }
  return best;
}

const std::vector<BotProfile>& shipped_profiles() {
  static const std::vector<BotProfile> kProfiles = [] {
    using F = GoalFamily;
    auto weights = [](std::initializer_list<std::pair<F, double>> init) {
      std::array<double, kNumGoalFamilies> w{};
      for (auto [f, v] : init) w[family_index(f)] = v;
      return w;
    };
    std::vector<BotProfile> v;
    v.push_back({"balanced",
                 weights({{F::Plain, -1.5},
                          {F::HalfFlush, 0.0},
                          {F::FullFlush, 0.5},
                          {F::AllPungs, 0.0},
                          {F::MixedStraight, 0.5},
                          {F::PureStraight, 0.5},
                          {F::MixedTripleChow, 0.5},
                          {F::AllTypes, 0.0},
                          {F::SevenPairs, 0.0},
                          {F::ThirteenOrphans, 0.5},
                          {F::KnittedStraight, 0.25},
                          {F::HonorsKnitted, 0.25}}),
                 0.5, false, 0x9a11});
    v.push_back({"claimer",
                 weights({{F::Plain, -1.0},
                          {F::HalfFlush, 0.5},
                          {F::FullFlush, 0.5},
                          {F::AllPungs, 1.0},
                          {F::MixedStraight, 0.0},
                          {F::PureStraight, 0.0},
                          {F::MixedTripleChow, 0.0},
                          {F::AllTypes, 0.5},
                          {F::SevenPairs, -3.0},
                          {F::ThirteenOrphans, -3.0},
                          {F::KnittedStraight, -2.0},
                          {F::HonorsKnitted, -3.0}}),
                 0.9, false, 0xc1a1});
    v.push_back({"pairs",
                 weights({{F::Plain, -2.0},
                          {F::HalfFlush, -0.5},
                          {F::FullFlush, 0.0},
                          {F::AllPungs, -0.5},
                          {F::MixedStraight, -0.5},
                          {F::PureStraight, -0.5},
                          {F::MixedTripleChow, -0.5},
                          {F::AllTypes, -1.0},
                          {F::SevenPairs, 1.5},
                          {F::ThirteenOrphans, -1.0},
                          {F::KnittedStraight, -1.0},
                          {F::HonorsKnitted, -1.0}}),
                 0.1, true, 0x9a125});
    return v;
  }();
  return kProfiles;
}

const BotProfile& profile_by_name(const std::string& name) {
  for (const auto& p : shipped_profiles()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown bot profile '" + name + "'");
}

ActionId bot_act(const BotProfile& profile, const Observation& obs) {
  const auto n_legal = obs.legal.count();
  if (n_legal == 0) throw std::invalid_argument("empty legal mask");
  if (n_legal == 1) {
    for (int a = 0; a < ActionId::kCount; ++a) {
      if (obs.legal.test(a)) return ActionId(a);
    }
  }
  if (obs.legal.test(ActionId::kWin)) return ActionId::win();

  const std::vector<Meld>& exposed = obs.melds[0];
  const TileCounts unseen = obs.unseen();

  if (obs.phase == Phase::AwaitDiscard) {
    std::vector<Candidate> cands;
    bool have_non_pair = false;
    if (profile.keep_pairs) {
      for (int i = 0; i < kNumTileKinds; ++i) {
        if (obs.legal.test(i) && obs.hand[i] < 2) have_non_pair = true;
      }
    }
    TileCounts hand = obs.hand;
    double best_score = 1e18;
    for (int i = 0; i < kNumTileKinds; ++i) {
      if (!obs.legal.test(i)) continue;
      if (profile.keep_pairs && have_non_pair && obs.hand[i] >= 2) continue;
      --hand[i];
      const HandValue v = evaluate_hand(profile, hand, exposed);
      ++hand[i];
      cands.push_back({ActionId::discard(Tile::from_index(i)), v.score, -1});
      best_score = std::min(best_score, v.score);
    }
    for (auto& c : cands) {
      if (c.score > best_score + 1e-9) continue;
      --hand[c.action.value()];
      const HandValue v = evaluate_hand(profile, hand, exposed);
      c.ukeire = ukeire(v.goal, hand, exposed, unseen);
      ++hand[c.action.value()];
    }
    if (obs.legal.test(ActionId::kKong) && profile.claim_aggressiveness >= 0.5) {
      const KongPlan k = apply_own_kong(obs.hand, exposed);
      const double s = evaluate_hand(profile, k.hand, k.melds).score;
      if (s <= best_score) return ActionId::kong();
    }
    return pick(cands, profile, obs);
  }

  // Claim phase.
  const Tile t = *obs.last_discard;
  const double current = evaluate_hand(profile, obs.hand, exposed).score;
  const double margin = 1.0 - 2.0 * profile.claim_aggressiveness;
  std::optional<ActionId> best_claim;
  double best_claim_score = 1e18;
  auto consider = [&](ActionId a, double s) {
    if (s < best_claim_score) {
      best_claim_score = s;
      best_claim = a;
    }
  };
  for (int a = ActionId::kChowLeft; a <= ActionId::kKong; ++a) {
    if (!obs.legal.test(a)) continue;
    TileCounts hand = obs.hand;
    std::vector<Meld> melds = exposed;
    if (a == ActionId::kPung) {
      hand[t.index()] -= 2;
      melds.emplace_back(MeldKind::Pung, t);
      consider(ActionId(a), best_discard_score(profile, hand, melds));
    } else if (a == ActionId::kKong) {
      hand[t.index()] -= 3;
      melds.emplace_back(MeldKind::ExposedKong, t);
      consider(ActionId(a), evaluate_hand(profile, hand, melds).score);
    } else {
      const int base = t.index() - (a - ActionId::kChowLeft);
      for (int k = 0; k < 3; ++k) {
        if (base + k != t.index()) --hand[base + k];
      }
      melds.emplace_back(MeldKind::Chow, Tile::from_index(base));
      consider(ActionId(a), best_discard_score(profile, hand, melds));
    }
  }
  if (best_claim && best_claim_score + margin < current) return *best_claim;
  return ActionId::pass();
}

}  // namespace mppo
