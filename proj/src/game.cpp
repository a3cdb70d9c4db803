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

#include "mppo/game.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mppo {

ActionId RandomPlayer::act(const Observation& obs) {
  const auto n = obs.legal.count();
  if (n == 0) throw std::invalid_argument("empty legal mask");
  auto pick = uniform_below(rng_, n);
  for (int a = 0; a < ActionId::kCount; ++a) {
    if (obs.legal.test(a) && pick-- == 0) return ActionId(a);
  }
  throw std::logic_error("unreachable");
}

GameRecord play_game(std::uint64_t seed, const std::array<Player*, kNumSeats>& players, const DecisionHook& hook) {
  GameRecord rec;
  rec.seed = seed;
  GameState s = reset(seed);
  while (s.phase != Phase::Finished) {
    const int seat = pending_seats(s).front();
    const Observation obs = observe(s, seat);
    const ActionId a = players[seat]->act(obs);
    if (hook) hook(s, obs, a);
    rec.decisions.push_back({seat, a});
    s = step(s, seat, a).state;
  }
  rec.final_state = std::move(s);
  return rec;
}

GameState replay(std::uint64_t seed, const std::vector<Decision>& decisions, const DecisionHook& hook) {
  GameState s = reset(seed);
  for (const Decision& d : decisions) {
    if (hook) hook(s, observe(s, d.seat), d.action);
    s = step(s, d.seat, d.action).state;
  }
  return s;
}

std::string write_replay_log(const GameRecord& record) {
  std::ostringstream os;
  os << "seed=" << record.seed << "\n";
  if (record.final_state.phase == Phase::Finished) {
    char buf[160];
    const auto& r = record.final_state.rewards;
    std::snprintf(buf, sizeof buf, "scores=%.17g %.17g %.17g %.17g\n", r[0], r[1], r[2], r[3]);
    os << buf;
  }
  for (const Decision& d : record.decisions) os << "seat=" << d.seat << " action=" << d.action.value() << "\n";
  return os.str();
}

GameRecord read_replay_log(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  GameRecord rec;
  bool have_seed = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!have_seed) {
      if (line.rfind("seed=", 0) != 0) throw std::invalid_argument("replay log: missing seed header");
      rec.seed = std::stoull(line.substr(5));
      have_seed = true;
      continue;
    }
    if (line.rfind("scores=", 0) == 0) {
      std::array<double, kNumSeats> sc{};
      if (std::sscanf(line.c_str() + 7, "%lf %lf %lf %lf", &sc[0], &sc[1], &sc[2], &sc[3]) != 4) {
        throw std::invalid_argument("replay log line " + std::to_string(line_no) + ": bad scores");
      }
      rec.logged_scores = sc;
      continue;
    }
    int seat = -1, action = -1;
    if (std::sscanf(line.c_str(), "seat=%d action=%d", &seat, &action) != 2 || seat < 0 || seat >= kNumSeats) {
      throw std::invalid_argument("replay log line " + std::to_string(line_no) + ": '" + line + "'");
    }
    rec.decisions.push_back({seat, ActionId(action)});
  }
  if (!have_seed) throw std::invalid_argument("replay log: empty");
  rec.final_state = replay(rec.seed, rec.decisions);
  return rec;
}

}  // namespace mppo
