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

#include "mppo/metrics.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <stdexcept>

#include "json.hpp"

namespace mppo {
namespace {

// Runs fn(i) for i in [0, n) over `threads` workers; results keep index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int threads, Fn fn) {
  std::vector<T> out(n);
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  const std::size_t workers = std::min<std::size_t>(threads, n);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

GameState play_with(const PlayerFactory& factory, std::uint64_t seed) {
  std::array<std::unique_ptr<Player>, kNumSeats> owned;
  std::array<Player*, kNumSeats> seats{};
  for (int s = 0; s < kNumSeats; ++s) {
    owned[s] = factory(seed, s);
    seats[s] = owned[s].get();
  }
  return play_game(seed, seats).final_state;
}

}  // namespace

ActionDistribution NetPolicy::distribution(const Observation& obs) const {
  return forward(params_, obs.encode(), obs.legal).probs;
}

ActionDistribution BotPolicy::distribution(const Observation& obs) const { return one_hot(bot_act(profile_, obs)); }

ActionDistribution one_hot(ActionId a) {
  ActionDistribution d{};
  d[a.value()] = 1.0;
  return d;
}

double total_variation(const ActionDistribution& p, const ActionDistribution& q) {
  double s = 0.0;
  for (int a = 0; a < kNumActions; ++a) s += std::abs(p[a] - q[a]);
  return 0.5 * s;
}

double d_action(const ActionPolicy& a, const ActionPolicy& b, const std::vector<Observation>& states) {
  double sum = 0.0;
  int n = 0;
  for (const Observation& obs : states) {
    if (obs.legal.count() <= 1) continue;
    sum += total_variation(a.distribution(obs), b.distribution(obs));
    ++n;
  }
  if (n == 0) throw std::invalid_argument("d_action: no states with more than one legal action");
  return sum / n;
}

std::vector<DemoDecision> demo_decisions(const DemoCollection& demos) {
  std::vector<DemoDecision> out;
  for (const DemoTrajectory& t : demos.trajectories) {
    std::optional<int> only;
    if (demos.winner_only) {
      only = t.winner();
      if (!only) continue;
    }
    replay(t.seed, t.decisions, [&](const GameState&, const Observation& obs, ActionId a) {
      if (only && obs.seat != *only) return;
      if (obs.legal.count() <= 1) return;
      out.push_back({obs, a});
    });
  }
  return out;
}

double d_action_vs_demos(const ActionPolicy& student, const std::vector<DemoDecision>& decisions) {
  if (decisions.empty()) throw std::invalid_argument("d_action_vs_demos: no decisions");
  double sum = 0.0;
  for (const DemoDecision& d : decisions) sum += total_variation(student.distribution(d.obs), one_hot(d.action));
  return sum / static_cast<double>(decisions.size());
}

void PatternDistribution::add_win(const FanResult& fan) {
  ++wins;
  auto bump = [&](Pattern p) {
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (patterns[i] == p) counts[i] += 1.0;
    }
  };
  if (principal_only) {
    if (auto p = principal_pattern(fan); p && is_major(*p)) bump(*p);
  } else {
    for (Pattern p : pattern_signature(fan)) bump(p);
  }
}

std::string PatternDistribution::to_json() const {
  nlohmann::json j;
  j["games"] = games;
  j["wins"] = wins;
  j["principal_only"] = principal_only;
  nlohmann::json probs = nlohmann::json::object();
  for (std::size_t i = 0; i < patterns.size(); ++i) probs[std::string(pattern_name(patterns[i]))] = probability(i);
  j["probabilities"] = probs;
  return j.dump();
}

double d_game(const PatternDistribution& a, const PatternDistribution& b) {
  if (a.patterns != b.patterns) throw std::invalid_argument("d_game: pattern lists differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.patterns.size(); ++i) s += std::abs(a.probability(i) - b.probability(i));
  return 0.5 * s;
}

PlayerFactory bot_factory(const BotProfile& profile) {
  return [profile](std::uint64_t, int) { return std::make_unique<ScriptedPlayer>(profile); };
}

PlayerFactory random_factory() {
  return [](std::uint64_t seed, int seat) {
    return std::make_unique<RandomPlayer>(mix_seed(seed * 4 + static_cast<std::uint64_t>(seat)));
  };
}

PlayerFactory net_factory(std::shared_ptr<const PolicyParams> params, bool greedy) {
  return [params = std::move(params), greedy](std::uint64_t seed, int seat) {
    return std::make_unique<NetPlayer>(params, mix_seed(seed * 4 + static_cast<std::uint64_t>(seat) + 0x51ed), greedy);
  };
}

ActionId NetPlayer::act(const Observation& obs) {
  const ForwardResult f = forward(*params_, obs.encode(), obs.legal);
  return greedy_ ? greedy_from(f).action : sample_from(f, rng_).action;
}

PatternDistribution pattern_histogram(const PlayerFactory& factory, const std::vector<std::uint64_t>& seeds,
                                      bool principal_only, int threads) {
  const auto finals =
      parallel_map<GameResult>(seeds.size(), threads, [&](std::size_t i) { return *play_with(factory, seeds[i]).result; });
  PatternDistribution d;
  d.principal_only = principal_only;
  for (const GameResult& r : finals) {
    ++d.games;
    if (r.winner) d.add_win(r.fan);
  }
  return d;
}

PatternDistribution pattern_histogram(const DemoCollection& demos, bool principal_only) {
  PatternDistribution d;
  d.principal_only = principal_only;
  for (const DemoTrajectory& t : demos.trajectories) {
    const GameState s = replay(t.seed, t.decisions);
    ++d.games;
    if (s.result && s.result->winner) d.add_win(s.result->fan);
  }
  return d;
}

double EvalReport::ci95() const {
  const int decided = x_wins + y_wins;
  if (decided == 0) return 0.0;
  return 1.96 * std::sqrt(win_rate * (1.0 - win_rate) / decided);
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["win_rate"] = win_rate;
  j["ci95"] = ci95();
  j["avg_score"] = avg_score;
  j["games"] = games;
  j["draws"] = draws;
  j["x_wins"] = x_wins;
  j["y_wins"] = y_wins;
  j["seat_swapped"] = seat_swapped;
  return j.dump();
}

EvalReport evaluate_seatswap(const PlayerFactory& x, const PlayerFactory& y, const std::vector<std::uint64_t>& seeds,
                             int threads) {
  if (seeds.empty()) throw std::invalid_argument("evaluate_seatswap: no seeds");
  // Game 2i: X on even seats; game 2i+1: X on odd seats.
  const auto finals = parallel_map<GameState>(2 * seeds.size(), threads, [&](std::size_t g) {
    const bool x_even = g % 2 == 0;
    PlayerFactory mixed = [&, x_even](std::uint64_t seed, int seat) {
      const bool is_x = (seat % 2 == 0) == x_even;
      return is_x ? x(seed, seat) : y(seed, seat);
    };
    return play_with(mixed, seeds[g / 2]);
  });
  EvalReport r;
  double score = 0.0;
  for (std::size_t g = 0; g < finals.size(); ++g) {
    const bool x_even = g % 2 == 0;
    const GameState& s = finals[g];
    ++r.games;
    for (int seat = 0; seat < kNumSeats; ++seat) {
      if ((seat % 2 == 0) == x_even) score += s.rewards[seat] / 2.0;
    }
    if (!s.result || !s.result->winner) {
      ++r.draws;
      continue;
    }
    const bool x_won = (*s.result->winner % 2 == 0) == x_even;
    (x_won ? r.x_wins : r.y_wins)++;
  }
  const int decided = r.x_wins + r.y_wins;
  r.win_rate = decided ? static_cast<double>(r.x_wins) / decided : 0.0;
  r.avg_score = score / r.games;
  return r;
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::size_t i = 0; i < count; ++i) s[i] = base + i;
  return s;
}

void write_plot_csv(const std::string& path, const std::vector<PlotRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "step,metric,value\n";
  for (const PlotRow& r : rows) {
    nlohmann::json v = r.value;
    os << r.step << ',' << r.metric << ',' << v.dump() << '\n';
  }
}

}  // namespace mppo
