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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mppo/bots.hpp"
#include "mppo/config.hpp"
#include "mppo/metrics.hpp"
#include "mppo/scoring.hpp"
#include "mppo/simd/kernels.hpp"
#include "mppo/training.hpp"

namespace {

using json = nlohmann::json;
using namespace mppo;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void emit(const json& j) { std::cout << j.dump() << std::endl; }

json fan_json(const FanResult& fan) {
  json matched = json::array();
  for (const auto& [p, pts] : fan.matched) matched.push_back({{"pattern", pattern_name(p)}, {"points", pts}});
  json sig = json::array();
  for (Pattern p : pattern_signature(fan)) sig.push_back(pattern_name(p));
  return {{"matched", matched}, {"total", fan.total}, {"shape", shape_name(fan.shape)}, {"major", sig},
          {"legal_win", fan.total >= 8}};
}

Wind parse_wind(const std::string& s) {
  static const std::map<std::string, Wind> m = {{"E", Wind::East}, {"S", Wind::South}, {"W", Wind::West},
                                                {"N", Wind::North}};
  const auto it = m.find(s);
  if (it == m.end()) throw UsageError("wind must be one of E,S,W,N");
  return it->second;
}

// "pung:5D,chow:1B,kong:WE,ckong:DR"
std::vector<Meld> parse_exposed(const std::string& text) {
  std::vector<Meld> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("exposed meld '" + item + "' needs kind:tile");
    const std::string kind = item.substr(0, colon);
    const Tile base = parse_tile(item.substr(colon + 1));
    if (kind == "chow") {
      out.emplace_back(MeldKind::Chow, base, 1);
    } else if (kind == "pung") {
      out.emplace_back(MeldKind::Pung, base, 1);
    } else if (kind == "kong") {
      out.emplace_back(MeldKind::ExposedKong, base, 1);
    } else if (kind == "ckong") {
      out.emplace_back(MeldKind::ConcealedKong, base);
    } else {
      throw UsageError("unknown meld kind '" + kind + "' (chow, pung, kong, ckong)");
    }
  }
  return out;
}

// A bot profile name, "random", or a checkpoint path.
PlayerFactory resolve_player(const std::string& spec, bool greedy) {
  if (spec == "random") return random_factory();
  for (const BotProfile& p : shipped_profiles()) {
    if (p.name == spec) return bot_factory(p);
  }
  if (!std::filesystem::exists(spec)) throw UsageError("'" + spec + "' is neither a bot profile nor a checkpoint");
  return net_factory(std::make_shared<const PolicyParams>(PolicyParams::load(spec)), greedy);
}

std::unique_ptr<ActionPolicy> resolve_policy(const std::string& spec, std::shared_ptr<PolicyParams>& holder) {
  for (const BotProfile& p : shipped_profiles()) {
    if (p.name == spec) return std::make_unique<BotPolicy>(p);
  }
  if (!std::filesystem::exists(spec)) throw UsageError("'" + spec + "' is neither a bot profile nor a checkpoint");
  holder = std::make_shared<PolicyParams>(PolicyParams::load(spec));
  return std::make_unique<NetPolicy>(*holder);
}

RunConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::string file = path;
  if (file.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) file = env;
  }
  RunConfig c;
  try {
    if (!file.empty()) {
      if (!std::filesystem::exists(file)) throw UsageError("config file '" + file + "' not found");
      c = load_config(file);
    }
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      apply_override(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  c.training.out_dir = c.out_dir;
  return c;
}

int cmd_score(const std::string& hand, const std::string& exposed, bool self_drawn, bool last_tile,
              const std::string& seat_wind, const std::string& prevalent) {
  const TileCounts counts = counts_of(parse_tiles(hand));
  const std::vector<Meld> melds = parse_exposed(exposed);
  WinContext ctx{self_drawn, last_tile, parse_wind(seat_wind), parse_wind(prevalent)};
  if (decompose(counts, melds).empty()) {
    emit({{"hand", counts_to_string(counts)}, {"winning_shape", false}});
    std::cerr << "not a winning shape\n";
    return kExitRuntime;
  }
  const FanResult fan = score(counts, melds, ctx);
  std::cerr << to_string(fan) << "\n";
  json j = fan_json(fan);
  j["hand"] = counts_to_string(counts);
  j["winning_shape"] = true;
  emit(j);
  return 0;
}

int cmd_replay(const std::string& path) {
  GameRecord rec;
  try {
    rec = read_replay_log(read_file(path));
  } catch (const std::logic_error& e) {
    std::cerr << "replay failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  const GameState& s = rec.final_state;
  json j = {{"seed", rec.seed}, {"decisions", rec.decisions.size()}, {"finished", s.phase == Phase::Finished},
            {"scores", s.rewards}, {"tiles_conserved", tiles_conserved(s)}};
  if (s.result && s.result->winner) {
    j["winner"] = *s.result->winner;
    j["fan"] = fan_json(s.result->fan);
  }
  bool match = true;
  if (rec.logged_scores) {
    match = *rec.logged_scores == s.rewards;
    j["logged_scores"] = *rec.logged_scores;
    j["scores_match"] = match;
  }
  std::cerr << describe(s);
  emit(j);
  if (!match) {
    std::cerr << "replayed scores differ from the log header\n";
    return kExitRuntime;
  }
  return 0;
}

int cmd_record(const std::string& teacher_name, int games, const std::string& out, std::uint64_t seed_base,
               const std::string& opponents, bool keep_all, const std::string& log_dir) {
  const BotProfile& teacher = profile_by_name(teacher_name);
  if (games <= 0) throw UsageError("--games must be positive");
  DemoCollection c;
  c.winner_only = !keep_all;
  std::array<bool, kNumSeats> teacher_seats{true, true, true, true};
  int teacher_wins = 0, decided = 0;
  for (int g = 0; g < games; ++g) {
    const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(g);
    ScriptedPlayer t(teacher);
    std::array<std::unique_ptr<Player>, kNumSeats> others;
    std::array<Player*, kNumSeats> seats{&t, &t, &t, &t};
    if (!opponents.empty()) {
      teacher_seats = {true, false, false, false};
      for (int s = 1; s < kNumSeats; ++s) {
        others[s] = opponents == "random" ? std::unique_ptr<Player>(std::make_unique<RandomPlayer>(mix_seed(seed * 4 + s)))
                                          : std::make_unique<ScriptedPlayer>(profile_by_name(opponents));
        seats[s] = others[s].get();
      }
    }
    DemoTrajectory traj = record(seats, seed, teacher.name);
    if (const auto w = traj.winner()) {
      ++decided;
      teacher_wins += teacher_seats[*w];
    }
    if (!log_dir.empty()) {
      std::filesystem::create_directories(log_dir);
      GameRecord rec{traj.seed, traj.decisions, verify_replay(traj), std::nullopt};
      std::ofstream(std::filesystem::path(log_dir) / ("game_" + std::to_string(seed) + ".log")) << write_replay_log(rec);
    }
    c.admit(std::move(traj), teacher_seats);
  }
  save_demos(c, out);
  emit({{"teacher", teacher.name}, {"games", games}, {"admitted", c.size()}, {"decided", decided},
        {"teacher_wins", teacher_wins}, {"winner_only", c.winner_only}, {"out", out}});
  return 0;
}

int cmd_inspect(const std::string& path, bool principal) {
  int dropped = 0;
  const DemoCollection c = load_demos(path, false, &dropped);
  std::map<std::string, int> teachers;
  std::array<int, kNumSeats> winners{};
  std::size_t decisions = 0;
  int wins = 0;
  for (const DemoTrajectory& t : c.trajectories) {
    ++teachers[t.teacher];
    decisions += t.decisions.size();
    if (auto w = t.winner()) {
      ++winners[*w];
      ++wins;
    }
  }
  const PatternDistribution hist = pattern_histogram(c, principal);
  json j = {{"trajectories", c.size()},
            {"dropped", dropped},
            {"teachers", teachers},
            {"win_rate", c.empty() ? 0.0 : static_cast<double>(wins) / c.size()},
            {"winner_seats", winners},
            {"mean_decisions", c.empty() ? 0.0 : static_cast<double>(decisions) / c.size()},
            {"patterns", json::parse(hist.to_json())}};
  emit(j);
  return 0;
}

int cmd_duel(const std::string& profiles, int games, std::uint64_t seed_base) {
  std::vector<std::string> names;
  std::stringstream ss(profiles);
  std::string n;
  while (std::getline(ss, n, ',')) names.push_back(n);
  if (names.size() != kNumSeats) throw UsageError("--profiles needs exactly four comma-separated names");
  std::array<PlayerFactory, kNumSeats> f;
  for (int s = 0; s < kNumSeats; ++s) f[s] = resolve_player(names[s], false);
  std::array<int, kNumSeats> wins{};
  std::array<double, kNumSeats> score{};
  std::array<PatternDistribution, kNumSeats> hist;
  int draws = 0;
  for (int g = 0; g < games; ++g) {
    const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(g);
    std::array<std::unique_ptr<Player>, kNumSeats> owned;
    std::array<Player*, kNumSeats> seats{};
    for (int s = 0; s < kNumSeats; ++s) {
      owned[s] = f[s](seed, s);
      seats[s] = owned[s].get();
    }
    const GameState st = play_game(seed, seats).final_state;
    for (int s = 0; s < kNumSeats; ++s) {
      score[s] += st.rewards[s];
      ++hist[s].games;
    }
    if (st.result && st.result->winner) {
      ++wins[*st.result->winner];
      hist[*st.result->winner].add_win(st.result->fan);
    } else {
      ++draws;
    }
  }
  json seats = json::array();
  for (int s = 0; s < kNumSeats; ++s) {
    seats.push_back({{"seat", s},
                     {"player", names[s]},
                     {"wins", wins[s]},
                     {"win_rate", static_cast<double>(wins[s]) / games},
                     {"avg_score", score[s] / games},
                     {"patterns", json::parse(hist[s].to_json())["probabilities"]}});
    std::cerr << "seat " << s << " " << names[s] << ": " << wins[s] << "/" << games << " wins\n";
  }
  emit({{"games", games}, {"draws", draws}, {"seats", seats}});
  return 0;
}

int cmd_eval(const std::string& x, const std::string& y, int seeds, std::uint64_t base, bool greedy, int threads) {
  if (seeds <= 0) throw UsageError("--seeds must be positive");
  const EvalReport r = evaluate_seatswap(resolve_player(x, greedy), resolve_player(y, greedy), seed_range(base, seeds),
                                         threads);
  json j = json::parse(r.to_json());
  j["x"] = x;
  j["y"] = y;
  emit(j);
  std::cerr << x << " vs " << y << ": win rate " << r.win_rate << " +/- " << r.ci95() << " over " << r.games
            << " games (" << r.draws << " draws)\n";
  return 0;
}

int cmd_metrics(const std::string& which, const std::string& student, const std::string& teacher,
                const std::string& demos_path, int holdout, int seeds, std::uint64_t base, bool principal,
                const std::string& csv, int threads) {
  std::vector<PlotRow> rows;
  if (which == "daction") {
    if (demos_path.empty()) throw UsageError("daction needs --demos");
    DemoCollection demos = load_demos(demos_path);
    if (holdout > 0 && static_cast<std::size_t>(holdout) < demos.size()) {
      demos = split_holdout(demos, holdout, 0).second;
    }
    std::shared_ptr<PolicyParams> holder;
    const auto pol = resolve_policy(student, holder);
    const auto decisions = demo_decisions(demos);
    const double d = d_action_vs_demos(*pol, decisions);
    emit({{"metric", "d_action"}, {"student", student}, {"states", decisions.size()},
          {"trajectories", demos.size()}, {"value", d}});
    rows.push_back({0, "d_action", d});
  } else if (which == "dgame") {
    if (teacher.empty()) throw UsageError("dgame needs --teacher");
    const auto s = seed_range(base, seeds);
    const PatternDistribution ps = pattern_histogram(resolve_player(student, false), s, principal, threads);
    const PatternDistribution pt = pattern_histogram(resolve_player(teacher, false), s, principal, threads);
    const double d = d_game(ps, pt);
    emit({{"metric", "d_game"}, {"student", student}, {"teacher", teacher}, {"games", seeds},
          {"principal_only", principal}, {"value", d}, {"student_patterns", json::parse(ps.to_json())},
          {"teacher_patterns", json::parse(pt.to_json())}});
    rows.push_back({0, "d_game", d});
  } else {
    throw UsageError("metrics kind must be daction or dgame");
  }
  if (!csv.empty()) write_plot_csv(csv, rows);
  return 0;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides, const std::string& demos_arg,
              const std::string& out_arg, bool baseline, const std::string& init_path) {
  RunConfig cfg = resolve_config(config_path, overrides);
  if (!out_arg.empty()) cfg.out_dir = cfg.training.out_dir = out_arg;
  if (!demos_arg.empty()) cfg.demos_path = demos_arg;
  try {
    cfg.training.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::cerr << "# resolved config\n" << to_text(cfg);
  std::cerr << "# feature layout hash 0x" << std::hex << feature_layout_hash() << std::dec << ", kernels "
            << simd::active().name << "\n";
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream(std::filesystem::path(cfg.out_dir) / "config.txt") << to_text(cfg);
  }
  DemoCollection demos;
  if (!cfg.demos_path.empty()) {
    int dropped = 0;
    demos = load_demos(cfg.demos_path, true, &dropped);
    std::cerr << "loaded " << demos.size() << " demos (" << dropped << " dropped)\n";
  }
  if (!baseline && cfg.training.learner.demo_actor_count > 0 && demos.empty()) {
    throw UsageError("demo_actor_count > 0 requires --demos");
  }
  std::optional<PolicyParams> init;
  if (!init_path.empty()) init = PolicyParams::load(init_path);
  if (cfg.bc_epochs > 0) {
    if (demos.empty()) throw UsageError("bc_epochs > 0 requires --demos");
    BcConfig bc;
    bc.epochs = cfg.bc_epochs;
    bc.learning_rate = cfg.bc_learning_rate;
    bc.seed = cfg.training.seed;
    BcStats st;
    PolicyParams start = init ? *init
                              : PolicyParams::initialize(cfg.training.net, cfg.training.seed,
                                                         cfg.training.init_policy_scale);
    init = behavior_cloning(std::move(start), demos, bc, &st);
    emit({{"phase", "behavior_cloning"}, {"samples", st.samples}, {"loss", st.epoch_loss},
          {"accuracy", st.epoch_accuracy}});
  }
  const StepCallback cb = [](const StepLog& l) { std::cout << l.to_json() << std::endl; };
  const TrainingResult r = baseline ? run_ppo_baseline(cfg.training, init, cb)
                                    : run_training(cfg.training, demos, init, cb);
  emit({{"phase", "done"},
        {"steps", r.log.size()},
        {"beta", r.beta()},
        {"generated", r.generated},
        {"consumed", r.consumed},
        {"checkpoints", r.checkpoints}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPPO Mahjong laboratory"};
  app.require_subcommand(1);

  std::string hand, exposed, seat_wind = "E", prevalent = "E";
  bool self_drawn = false, last_tile = false;
  auto* score_cmd = app.add_subcommand("score", "Score a 14-tile winning hand");
  score_cmd->add_option("--hand", hand, "Concealed tiles incl. winning tile, e.g. 1C2C3C...")->required();
  score_cmd->add_option("--exposed", exposed, "Exposed melds, e.g. pung:5D,chow:1B,kong:WE,ckong:DR");
  score_cmd->add_flag("--selfdrawn", self_drawn);
  score_cmd->add_flag("--last-tile", last_tile);
  score_cmd->add_option("--seat-wind", seat_wind)->check(CLI::IsMember({"E", "S", "W", "N"}));
  score_cmd->add_option("--prevalent-wind", prevalent)->check(CLI::IsMember({"E", "S", "W", "N"}));

  std::string log_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-execute a replay log and print final scores");
  replay_cmd->add_option("--log", log_path)->required();

  std::string teacher, out, opponents, log_dir;
  int games = 100;
  std::uint64_t seed_base = 0;
  bool keep_all = false;
  auto* record_cmd = app.add_subcommand("record-demos", "Record teacher demonstrations");
  record_cmd->add_option("--teacher", teacher)->required();
  record_cmd->add_option("--games", games);
  record_cmd->add_option("--out", out)->required();
  record_cmd->add_option("--seed-base", seed_base);
  record_cmd->add_option("--opponents", opponents, "Opponent profile or 'random' (default: teacher self-play)");
  record_cmd->add_flag("--keep-all", keep_all, "Disable winner-only admission");
  record_cmd->add_option("--replay-logs", log_dir, "Also write one replay log per game into this directory");

  std::string inspect_path;
  bool principal = false;
  auto* inspect_cmd = app.add_subcommand("inspect-demos", "Summarize a demonstration file");
  inspect_cmd->add_option("file", inspect_path)->required();
  inspect_cmd->add_flag("--principal", principal, "Count only the principal pattern per win");

  std::string profiles;
  auto* duel_cmd = app.add_subcommand("bot-duel", "Play four players against each other");
  duel_cmd->add_option("--profiles", profiles, "Four comma-separated profiles, 'random', or checkpoints")->required();
  duel_cmd->add_option("--games", games);
  duel_cmd->add_option("--seed-base", seed_base);

  std::string x, y;
  int seeds = 256, threads = 1;
  bool greedy = false;
  auto* eval_cmd = app.add_subcommand("eval", "Seat-swapped win rate of X against Y");
  eval_cmd->add_option("--x", x)->required();
  eval_cmd->add_option("--y", y)->required();
  eval_cmd->add_option("--seeds", seeds);
  eval_cmd->add_option("--seed-base", seed_base);
  eval_cmd->add_flag("--greedy", greedy, "Networks play their argmax action");
  eval_cmd->add_option("--threads", threads);

  std::string which, student, demos_path, csv;
  int holdout = 0;
  auto* metrics_cmd = app.add_subcommand("metrics", "D_action or D_game between a student and a teacher");
  metrics_cmd->add_option("kind", which, "daction | dgame")->required()->check(CLI::IsMember({"daction", "dgame"}));
  metrics_cmd->add_option("--student", student)->required();
  metrics_cmd->add_option("--teacher", teacher);
  metrics_cmd->add_option("--demos", demos_path);
  metrics_cmd->add_option("--holdout", holdout, "Use a seeded holdout of this many trajectories");
  metrics_cmd->add_option("--seeds", seeds, "Self-play games per side for dgame");
  metrics_cmd->add_option("--seed-base", seed_base);
  metrics_cmd->add_flag("--principal", principal);
  metrics_cmd->add_option("--csv", csv, "Write step,metric,value rows");
  metrics_cmd->add_option("--threads", threads);

  std::string config_path, init_path;
  std::vector<std::string> overrides;
  bool baseline = false;
  auto* train_cmd = app.add_subcommand("train", "Run MPPO (or the PPO baseline)");
  train_cmd->add_option("--config", config_path, std::string("Config file (default: $") + kConfigEnv + ")");
  train_cmd->add_option("--demos", demos_path);
  train_cmd->add_option("--out", out);
  train_cmd->add_option("--set", overrides, "key=value override, repeatable");
  train_cmd->add_option("--init", init_path, "Start from this checkpoint");
  train_cmd->add_flag("--baseline", baseline, "Standard PPO without LfD actors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*score_cmd) return cmd_score(hand, exposed, self_drawn, last_tile, seat_wind, prevalent);
    if (*replay_cmd) return cmd_replay(log_path);
    if (*record_cmd) return cmd_record(teacher, games, out, seed_base, opponents, keep_all, log_dir);
    if (*inspect_cmd) return cmd_inspect(inspect_path, principal);
    if (*duel_cmd) return cmd_duel(profiles, games, seed_base);
    if (*eval_cmd) return cmd_eval(x, y, seeds, seed_base, greedy, threads);
    if (*metrics_cmd) {
      return cmd_metrics(which, student, teacher, demos_path, holdout, seeds, seed_base, principal, csv, threads);
    }
    if (*train_cmd) return cmd_train(config_path, overrides, demos_path, out, baseline, init_path);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
