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

#include "mppo/engine.hpp"

#include <sstream>

namespace mppo {
namespace {

constexpr const char* kPhaseNames[] = {"AwaitDiscard", "AwaitClaims", "Finished"};

struct KongTarget {
  Tile tile;
  bool promotion = false;
};

std::optional<KongTarget> kong_target(const SeatState& seat) {
  for (int i = 0; i < kNumTileKinds; ++i) {
    if (seat.hand[i] == 4) return KongTarget{Tile::from_index(i), false};
  }
  std::optional<KongTarget> best;
  for (const Meld& m : seat.melds) {
    if (m.kind() == MeldKind::Pung && seat.hand[m.base().index()] > 0) {
      if (!best || m.base() < best->tile) best = KongTarget{m.base(), true};
    }
  }
  return best;
}

WinContext win_context(const GameState& s, int seat, bool self_drawn) {
  WinContext ctx;
  ctx.self_drawn = self_drawn;
  ctx.last_tile = s.wall.remaining() == 0;
  ctx.seat_wind = s.seat_winds[seat];
  ctx.prevalent_wind = s.prevalent_wind;
  return ctx;
}

void finish(GameState& s, GameResult result) {
  s.phase = Phase::Finished;
  s.result = std::move(result);
  s.rewards = settlement(*s.result);
  s.claims = {};
}

GameState draw_for(GameState s, int seat) {
  if (s.wall.remaining() == 0) {
    finish(s, GameResult{});
    return s;
  }
  const Tile t = s.wall.draw_front();
  ++s.seats[seat].hand[t.index()];
  s.last_drawn = t;
  s.turn = seat;
  s.phase = Phase::AwaitDiscard;
  return s;
}

std::string seat_error(const GameState& s, int seat, const std::string& what) {
  std::ostringstream os;
  os << "seat " << seat << ": " << what << " (phase " << kPhaseNames[static_cast<int>(s.phase)] << ", turn " << s.turn
     << ", step " << s.steps << ")";
  return os.str();
}

}  // namespace

ActionId::ActionId(int value) {
  if (value < 0 || value >= kCount) throw std::out_of_range("action id out of range: " + std::to_string(value));
  value_ = static_cast<std::uint8_t>(value);
}

std::string ActionId::to_string() const {
  if (is_discard()) return "discard:" + discard_tile().to_string();
  switch (value_) {
    case kChowLeft: return "chow:left";
    case kChowMiddle: return "chow:middle";
    case kChowRight: return "chow:right";
    case kPung: return "pung";
    case kKong: return "kong";
    case kWin: return "win";
    default: return "pass";
  }
}

GameState reset(std::uint64_t seed) {
  GameState s;
  s.seed = seed;
  s.wall = shuffle_wall(seed);
  for (int round = 0; round < 13; ++round) {
    for (int seat = 0; seat < kNumSeats; ++seat) ++s.seats[seat].hand[s.wall.draw_front().index()];
  }
  return draw_for(std::move(s), 0);
}

LegalMask legal_actions(const GameState& s, int seat) {
  if (seat < 0 || seat >= kNumSeats) throw NoPendingDecision("seat out of range");
  LegalMask mask;
  const SeatState& me = s.seats[seat];
  switch (s.phase) {
    case Phase::Finished:
      throw NoPendingDecision(seat_error(s, seat, "game is finished"));
    case Phase::AwaitDiscard: {
      if (seat != s.turn) throw NoPendingDecision(seat_error(s, seat, "not this seat's turn"));
      for (int i = 0; i < kNumTileKinds; ++i) {
        if (me.hand[i] > 0) mask.set(i);
      }
      if (s.wall.remaining() >= 1 && kong_target(me)) mask.set(ActionId::kKong);
      if (s.last_drawn && can_declare_win(me.hand, me.melds, win_context(s, seat, true))) mask.set(ActionId::kWin);
      return mask;
    }
    case Phase::AwaitClaims: {
      const auto& pending = *s.last_discard;
      if (seat == pending.from) throw NoPendingDecision(seat_error(s, seat, "discarder has no claim"));
      if (s.claims[seat]) throw NoPendingDecision(seat_error(s, seat, "claim already made"));
      mask.set(ActionId::kPass);
      const Tile t = pending.tile;
      TileCounts with = me.hand;
      ++with[t.index()];
      if (can_declare_win(with, me.melds, win_context(s, seat, false))) mask.set(ActionId::kWin);
      if (s.wall.remaining() == 0) return mask;
      if (me.hand[t.index()] >= 2) mask.set(ActionId::kPung);
      if (me.hand[t.index()] == 3) mask.set(ActionId::kKong);
      if (seat == (pending.from + 1) % kNumSeats) {
        for (const Meld& chow : enumerate_chows(me.hand, t)) {
          mask.set(ActionId::kChowLeft + (t.index() - chow.base().index()));
        }
      }
      return mask;
    }
  }
  return mask;
}

std::vector<int> pending_seats(const GameState& s) {
  std::vector<int> out;
  if (s.phase == Phase::Finished) return out;
  if (s.phase == Phase::AwaitDiscard) {
    out.push_back(s.turn);
    return out;
  }
  for (int k = 1; k < kNumSeats; ++k) {
    const int seat = (s.last_discard->from + k) % kNumSeats;
    if (s.claims[seat]) continue;
    if (legal_actions(s, seat).count() > 1) out.push_back(seat);
  }
  return out;
}

StepResult step(const GameState& state, int seat, ActionId action) {
  const LegalMask mask = legal_actions(state, seat);
  if (!mask.test(action.value())) {
    throw IllegalAction(seat_error(state, seat, "illegal action " + action.to_string()));
  }
  GameState s = state;
  ++s.steps;
  SeatState& me = s.seats[seat];

  if (s.phase == Phase::AwaitDiscard) {
    if (action.is_discard()) {
      --me.hand[action.value()];
      s.last_discard = PendingDiscard{action.discard_tile(), seat};
      s.last_drawn.reset();
      s.phase = Phase::AwaitClaims;
      s.claims = {};
      if (pending_seats(s).empty()) s = claim_resolution(s, s.claims);
    } else if (action.value() == ActionId::kKong) {
      const KongTarget target = *kong_target(me);
      if (target.promotion) {
        --me.hand[target.tile.index()];
        for (Meld& m : me.melds) {
          if (m.kind() == MeldKind::Pung && m.base() == target.tile) {
            m = Meld(MeldKind::ExposedKong, target.tile, m.claimed_from());
          }
        }
      } else {
        me.hand[target.tile.index()] = 0;
        me.melds.emplace_back(MeldKind::ConcealedKong, target.tile);
      }
      const Tile replacement = s.wall.draw_back();
      ++me.hand[replacement.index()];
      s.last_drawn = replacement;
    } else {
      GameResult r;
      r.winner = seat;
      r.self_drawn = true;
      r.fan = score(me.hand, me.melds, win_context(s, seat, true));
      finish(s, std::move(r));
    }
  } else {
    s.claims[seat] = action;
    if (pending_seats(s).empty()) s = claim_resolution(s, s.claims);
  }

  StepResult out;
  out.terminal = s.phase == Phase::Finished;
  if (out.terminal) out.rewards = s.rewards;
  out.state = std::move(s);
  return out;
}

GameState claim_resolution(const GameState& state, const std::array<std::optional<ActionId>, kNumSeats>& claims) {
  if (state.phase != Phase::AwaitClaims) throw std::logic_error("claim_resolution outside the claim phase");
  GameState s = state;
  const PendingDiscard pending = *s.last_discard;
  const Tile t = pending.tile;

  std::optional<int> winner, melder, chower;
  for (int k = 1; k < kNumSeats; ++k) {
    const int seat = (pending.from + k) % kNumSeats;
    const ActionId choice = claims[seat].value_or(ActionId::pass());
    if (choice == ActionId::pass()) continue;
    GameState probe = state;
    probe.claims[seat].reset();
    if (!legal_actions(probe, seat).test(choice.value())) {
      throw IllegalAction(seat_error(state, seat, "illegal claim " + choice.to_string()));
    }
    if (choice == ActionId::win()) {
      if (!winner) winner = seat;
    } else if (choice == ActionId::pung() || choice == ActionId::kong()) {
      melder = seat;
    } else if (choice.is_chow()) {
      chower = seat;
    }
  }

  s.last_discard.reset();
  s.claims = {};
  s.last_drawn.reset();

  if (winner) {
    SeatState& w = s.seats[*winner];
    ++w.hand[t.index()];
    GameResult r;
    r.winner = *winner;
    r.discarder = pending.from;
    r.self_drawn = false;
    WinContext ctx;
    ctx.self_drawn = false;
    ctx.last_tile = s.wall.remaining() == 0;
    ctx.seat_wind = s.seat_winds[*winner];
    ctx.prevalent_wind = s.prevalent_wind;
    r.fan = score(w.hand, w.melds, ctx);
    finish(s, std::move(r));
    return s;
  }
  if (melder) {
    SeatState& m = s.seats[*melder];
    const ActionId choice = *claims[*melder];
    if (choice == ActionId::pung()) {
      m.hand[t.index()] -= 2;
      m.melds.emplace_back(MeldKind::Pung, t, pending.from);
      s.turn = *melder;
      s.phase = Phase::AwaitDiscard;
    } else {
      m.hand[t.index()] -= 3;
      m.melds.emplace_back(MeldKind::ExposedKong, t, pending.from);
      const Tile replacement = s.wall.draw_back();
      ++m.hand[replacement.index()];
      s.last_drawn = replacement;
      s.turn = *melder;
      s.phase = Phase::AwaitDiscard;
    }
    return s;
  }
  if (chower) {
    SeatState& c = s.seats[*chower];
    const int offset = claims[*chower]->value() - ActionId::kChowLeft;
    const int base = t.index() - offset;
    for (int k = 0; k < 3; ++k) {
      if (base + k != t.index()) --c.hand[base + k];
    }
    c.melds.emplace_back(MeldKind::Chow, Tile::from_index(base), pending.from);
    s.turn = *chower;
    s.phase = Phase::AwaitDiscard;
    return s;
  }
  s.seats[pending.from].discards.push_back(t);
  return draw_for(std::move(s), (pending.from + 1) % kNumSeats);
}

bool tiles_conserved(const GameState& s) {
  std::array<int, kNumTileKinds> count{};
  for (int i = s.wall.draw_cursor; i < kNumTiles - s.wall.tail_drawn; ++i) ++count[s.wall.tiles[i].index()];
  for (const SeatState& seat : s.seats) {
    for (int i = 0; i < kNumTileKinds; ++i) count[i] += seat.hand[i];
    for (const Meld& m : seat.melds) {
      for (Tile t : m.tiles()) ++count[t.index()];
    }
    for (Tile t : seat.discards) ++count[t.index()];
  }
  if (s.last_discard) ++count[s.last_discard->tile.index()];
  for (int c : count) {
    if (c != kCopiesPerKind) return false;
  }
  return true;
}

std::array<double, kNumSeats> settlement(const GameResult& result) {
  std::array<double, kNumSeats> r{};
  if (!result.winner) return r;
  const double unit = kMinWinPoints + result.fan.total;
  const int w = *result.winner;
  for (int seat = 0; seat < kNumSeats; ++seat) {
    if (seat == w) continue;
    double pay = unit;
    if (!result.self_drawn && seat != result.discarder) pay = kMinWinPoints;
    r[seat] -= pay * kRewardScale;
    r[w] += pay * kRewardScale;
  }
  return r;
}

std::string describe(const GameState& s) {
  std::ostringstream os;
  os << "seed=" << s.seed << " phase=" << kPhaseNames[static_cast<int>(s.phase)] << " turn=" << s.turn
     << " wall=" << s.wall.remaining() << " steps=" << s.steps << "\n";
  for (int seat = 0; seat < kNumSeats; ++seat) {
    const SeatState& st = s.seats[seat];
    os << "  seat " << seat << (seat == s.turn ? "*" : " ") << " hand=" << counts_to_string(st.hand) << " melds=[";
    for (std::size_t i = 0; i < st.melds.size(); ++i) os << (i ? " " : "") << st.melds[i].to_string();
    os << "] discards=" << tiles_to_string(st.discards) << "\n";
  }
  if (s.last_discard) os << "  pending " << s.last_discard->tile.to_string() << " from " << s.last_discard->from << "\n";
  if (s.result) {
    if (s.result->winner) {
      os << "  winner " << *s.result->winner << (s.result->self_drawn ? " self-drawn " : " on discard ")
         << to_string(s.result->fan) << "\n";
    } else {
      os << "  exhaustive draw\n";
    }
  }
  return os.str();
}

}  // namespace mppo
