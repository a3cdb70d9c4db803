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

#include "mppo/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mppo {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

template <typename T>
T parse_number(const std::string& v) {
  T out{};
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) throw ConfigError("bad number '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad boolean '" + v + "'");
}

std::string fmt(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Key {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define MPPO_INT(path)                                                                         \
  Key {                                                                                        \
    [](RunConfig& c, const std::string& v) { c.path = parse_number<decltype(c.path)>(v); },    \
        [](const RunConfig& c) { return std::to_string(c.path); }                              \
  }
#define MPPO_REAL(path)                                                                        \
  Key {                                                                                        \
    [](RunConfig& c, const std::string& v) { c.path = parse_number<double>(v); },              \
        [](const RunConfig& c) { return fmt(c.path); }                                         \
  }
#define MPPO_BOOL(path)                                                                        \
  Key {                                                                                        \
    [](RunConfig& c, const std::string& v) { c.path = parse_bool(v); },                        \
        [](const RunConfig& c) { return std::string(c.path ? "true" : "false"); }              \
  }
#define MPPO_STR(path)                                                                         \
  Key {                                                                                        \
    [](RunConfig& c, const std::string& v) { c.path = v; },                                    \
        [](const RunConfig& c) { return "\"" + c.path + "\""; }                                \
  }

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> k = {
      {"clip_epsilon", MPPO_REAL(training.learner.clip_epsilon)},
      {"entropy_coef", MPPO_REAL(training.learner.entropy_coef)},
      {"value_coef", MPPO_REAL(training.learner.value_coef)},
      {"learning_rate", MPPO_REAL(training.learner.learning_rate)},
      {"max_grad_norm", MPPO_REAL(training.learner.max_grad_norm)},
      {"batch_size", MPPO_INT(training.learner.batch_size)},
      {"minibatch_size", MPPO_INT(training.learner.minibatch_size)},
      {"epochs_per_batch", MPPO_INT(training.learner.epochs_per_batch)},
      {"demo_actor_count", MPPO_INT(training.learner.demo_actor_count)},
      {"selfplay_actor_count", MPPO_INT(training.learner.selfplay_actor_count)},
      {"con_gen_lo", MPPO_REAL(training.learner.con_gen_lo)},
      {"con_gen_hi", MPPO_REAL(training.learner.con_gen_hi)},
      {"policy_freeze_steps", MPPO_INT(training.learner.policy_freeze_steps)},
      {"gamma", MPPO_REAL(training.learner.gamma)},
      {"lambda", MPPO_REAL(training.learner.lambda)},
      {"adv_norm", MPPO_BOOL(training.learner.adv_norm)},
      {"seed", MPPO_INT(training.seed)},
      {"learner_steps", MPPO_INT(training.learner_steps)},
      {"time_budget_seconds", MPPO_REAL(training.time_budget_seconds)},
      {"checkpoint_every", MPPO_INT(training.checkpoint_every)},
      {"deterministic", MPPO_BOOL(training.deterministic)},
      {"queue_capacity", MPPO_INT(training.queue_capacity)},
      {"engine_step_cost", MPPO_REAL(training.engine_step_cost)},
      {"learner_sample_cost", MPPO_REAL(training.learner_sample_cost)},
      {"lfd_value_all_states", MPPO_BOOL(training.lfd_value_all_states)},
      {"init_policy_scale", MPPO_REAL(training.init_policy_scale)},
      {"starvation_timeout_seconds", MPPO_REAL(training.starvation_timeout_seconds)},
      {"hidden",
       Key{[](RunConfig& c, const std::string& v) {
             std::vector<int> h;
             std::stringstream ss(v);
             std::string part;
             while (std::getline(ss, part, ',')) h.push_back(parse_number<int>(trim(part)));
             if (h.empty()) throw ConfigError("hidden needs at least one layer");
             for (int x : h) {
               if (x <= 0) throw ConfigError("hidden layer sizes must be positive");
             }
             c.training.net.hidden = h;
           },
           [](const RunConfig& c) {
             std::string out;
             for (std::size_t i = 0; i < c.training.net.hidden.size(); ++i) {
               if (i) out += ',';
               out += std::to_string(c.training.net.hidden[i]);
             }
             return out;
           }}},
      {"dgame_seeds", MPPO_INT(dgame_seeds)},
      {"daction_holdout", MPPO_INT(daction_holdout)},
      {"eval_seeds", MPPO_INT(eval_seeds)},
      {"eval_seed_base", MPPO_INT(eval_seed_base)},
      {"principal_pattern_only", MPPO_BOOL(principal_pattern_only)},
      {"eval_threads", MPPO_INT(eval_threads)},
      {"bc_epochs", MPPO_INT(bc_epochs)},
      {"bc_learning_rate", MPPO_REAL(bc_learning_rate)},
      {"demos", MPPO_STR(demos_path)},
      {"out_dir", MPPO_STR(out_dir)},
  };
  return k;
}

}  // namespace

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
  const auto it = keys().find(key);
  if (it == keys().end()) throw ConfigError("unknown config key '" + key + "'");
  try {
    it->second.set(config, unquote(trim(value)));
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    try {
      apply_override(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  c.training.out_dir = c.out_dir;
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& config) {
  std::string out;
  for (const auto& [name, key] : keys()) out += name + " = " + key.get(config) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [name, key] : keys()) out.push_back(name);
  return out;
}

}  // namespace mppo
