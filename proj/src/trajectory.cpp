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

#include "mppo/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "mppo/advantage.hpp"

namespace mppo {
namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view field(std::string_view part, std::string_view key) {
  if (part.size() < key.size() + 1 || part.substr(0, key.size()) != key || part[key.size()] != '=') {
    throw std::invalid_argument("expected field '" + std::string(key) + "'");
  }
  return part.substr(key.size() + 1);
}

}  // namespace

std::vector<TrainSample> build_samples(const std::array<std::vector<StepRecord>, kNumSeats>& steps,
                                       const std::array<double, kNumSeats>& final_rewards, double gamma,
                                       double lambda, SampleSource source, std::uint64_t seed,
                                       std::uint64_t policy_version) {
  std::vector<TrainSample> out;
  for (int seat = 0; seat < kNumSeats; ++seat) {
    const auto& seq = steps[seat];
    if (seq.empty()) continue;
    EpisodeRollout ro;
    ro.rewards.assign(seq.size(), 0.0);
    ro.rewards.back() = final_rewards[seat];
    for (const StepRecord& r : seq) ro.values.push_back(r.value);
    const GaeResult g = gae(ro, gamma, lambda);
    for (std::size_t t = 0; t < seq.size(); ++t) {
      TrainSample s;
      s.obs = seq[t].obs;
      s.action = seq[t].action;
      s.advantage = g.advantages[t];
      s.value_target = g.targets[t];
      s.value = seq[t].value;
      s.behavior_log_prob = seq[t].log_prob;
      s.episode_return = final_rewards[seat];
      s.source = source;
      s.seat = seat;
      s.seed = seed;
      s.policy_version = policy_version;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::optional<int> DemoTrajectory::winner() const {
  for (int s = 0; s < kNumSeats; ++s) {
    if (final_scores[s] > 0.0) return s;
  }
  return std::nullopt;
}

DemoTrajectory record(const std::array<Player*, kNumSeats>& players, std::uint64_t seed, std::string teacher) {
  GameRecord rec = play_game(seed, players);
  DemoTrajectory t;
  t.seed = seed;
  t.decisions = std::move(rec.decisions);
  t.final_scores = rec.final_state.rewards;
  t.teacher = std::move(teacher);
  return t;
}

GameState verify_replay(const DemoTrajectory& traj) {
  GameState s;
  try {
    s = replay(traj.seed, traj.decisions);
  } catch (const std::logic_error& e) {
    throw ReplayDivergence("seed " + std::to_string(traj.seed) + ": " + e.what());
  }
  if (s.phase != Phase::Finished) throw ReplayDivergence("seed " + std::to_string(traj.seed) + ": game not finished");
  if (s.rewards != traj.final_scores) {
    throw ReplayDivergence("seed " + std::to_string(traj.seed) + ": final scores differ");
  }
  return s;
}

bool DemoCollection::admit(DemoTrajectory traj, std::array<bool, kNumSeats> teacher_seats) {
  if (winner_only) {
    const auto w = traj.winner();
    if (!w || !teacher_seats[*w]) return false;
  }
  trajectories.push_back(std::move(traj));
  return true;
}

std::vector<TrainSample> replay_to_samples(const DemoTrajectory& traj, const PolicyParams& params, double gamma,
                                           double lambda, bool winner_only, std::uint64_t policy_version,
                                           ReplayStats* stats, bool value_all_states) {
  std::array<bool, kNumSeats> train{};
  if (winner_only) {
    const auto w = traj.winner();
    if (!w) throw std::invalid_argument("replay_to_samples: trajectory has no winner");
    train[*w] = true;
  } else {
    train.fill(true);
  }
  std::array<std::vector<StepRecord>, kNumSeats> steps;
  GameState s = reset(traj.seed);
  int forwards = 0;
  try {
    for (const Decision& d : traj.decisions) {
      if (train[d.seat]) {
        const Observation obs = observe(s, d.seat);
        if (!obs.legal.test(d.action.value())) throw IllegalAction("demo action " + d.action.to_string());
        StepRecord r{encode(obs), d.action, 0.0, 0.0};
        const ForwardResult f = forward(params, r.obs);
        ++forwards;
        r.log_prob = f.log_prob(d.action.value());
        r.value = f.value;
        steps[d.seat].push_back(std::move(r));
      } else if (value_all_states) {
        forward(params, encode(observe(s, d.seat)));  // critic on a non-training seat, output unused
        ++forwards;
      }
      s = step(s, d.seat, d.action).state;
    }
  } catch (const std::logic_error& e) {
    throw ReplayDivergence("seed " + std::to_string(traj.seed) + ": " + e.what());
  }
  if (s.phase != Phase::Finished || s.rewards != traj.final_scores) {
    throw ReplayDivergence("seed " + std::to_string(traj.seed) + ": replayed outcome differs");
  }
  if (stats) {
    stats->forwards += forwards;
    stats->engine_steps += static_cast<int>(traj.decisions.size());
  }
  // Rewards come from the live engine, not the stored record.
  return build_samples(steps, s.rewards, gamma, lambda, SampleSource::Demo, traj.seed, policy_version);
}

std::string serialize(const DemoTrajectory& traj) {
  std::string out = "e=" + std::to_string(traj.seed) + "\tteacher=" + traj.teacher + "\tscores=";
  for (int s = 0; s < kNumSeats; ++s) {
    if (s) out += ',';
    out += format_double(traj.final_scores[s]);
  }
  out += "\tactions=";
  for (std::size_t i = 0; i < traj.decisions.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(traj.decisions[i].seat) + ':' + std::to_string(traj.decisions[i].action.value());
  }
  return out;
}

DemoTrajectory parse_trajectory(const std::string& line) {
  const auto parts = split(line, '\t');
  if (parts.size() != 4) throw std::invalid_argument("trajectory: expected 4 tab-separated fields");
  DemoTrajectory t;
  t.seed = parse_u64(field(parts[0], "e"));
  t.teacher = std::string(field(parts[1], "teacher"));
  if (t.teacher.find_first_of(",\t") != std::string::npos) throw std::invalid_argument("trajectory: bad teacher id");
  const auto scores = split(field(parts[2], "scores"), ',');
  if (scores.size() != kNumSeats) throw std::invalid_argument("trajectory: expected 4 scores");
  for (int s = 0; s < kNumSeats; ++s) t.final_scores[s] = parse_double(scores[s]);
  const auto actions = field(parts[3], "actions");
  if (!actions.empty()) {
    for (std::string_view rec : split(actions, ',')) {
      const auto colon = rec.find(':');
      if (colon == std::string_view::npos) throw std::invalid_argument("trajectory: bad decision '" + std::string(rec) + "'");
      const auto seat = parse_u64(rec.substr(0, colon));
      const auto action = parse_u64(rec.substr(colon + 1));
      if (seat >= kNumSeats || action >= static_cast<std::uint64_t>(ActionId::kCount)) {
        throw std::invalid_argument("trajectory: decision out of range '" + std::string(rec) + "'");
      }
      t.decisions.push_back({static_cast<int>(seat), ActionId(static_cast<int>(action))});
    }
  }
  return t;
}

std::string serialize(const DemoCollection& collection) {
  std::string out;
  for (const DemoTrajectory& t : collection.trajectories) {
    out += serialize(t);
    out += '\n';
  }
  return out;
}

DemoCollection parse_collection(const std::string& text, bool winner_only, int* dropped) {
  DemoCollection c;
  c.winner_only = winner_only;
  int n_dropped = 0;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    DemoTrajectory t;
    try {
      t = parse_trajectory(line);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("demos line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      verify_replay(t);
    } catch (const ReplayDivergence& e) {
      std::cerr << "warning: dropping demo on line " << line_no << ": " << e.what() << "\n";
      ++n_dropped;
      continue;
    }
    if (!c.admit(std::move(t))) ++n_dropped;
  }
  if (dropped) *dropped = n_dropped;
  return c;
}

void save_demos(const DemoCollection& collection, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << serialize(collection);
}

DemoCollection load_demos(const std::string& path, bool winner_only, int* dropped) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_collection(ss.str(), winner_only, dropped);
}

std::pair<DemoCollection, DemoCollection> split_holdout(const DemoCollection& collection, std::size_t n_holdout,
                                                        std::uint64_t split_seed) {
  if (n_holdout >= collection.size()) throw std::invalid_argument("split_holdout: n_holdout must be < size");
  std::vector<std::size_t> idx(collection.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(split_seed);
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_below(rng, i)]);
  std::vector<bool> in_holdout(collection.size(), false);
  for (std::size_t i = 0; i < n_holdout; ++i) in_holdout[idx[i]] = true;
  DemoCollection train, holdout;
  train.winner_only = holdout.winner_only = collection.winner_only;
  for (std::size_t i = 0; i < collection.size(); ++i) {
    (in_holdout[i] ? holdout : train).trajectories.push_back(collection.trajectories[i]);
  }
  return {std::move(train), std::move(holdout)};
}

}  // namespace mppo
