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

#ifndef MPPO_CONFIG_HPP_
#define MPPO_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mppo/training.hpp"

namespace mppo {

struct RunConfig {
  TrainingConfig training;
  // Metric options.
  int dgame_seeds = 2000;
  int daction_holdout = 100;
  int eval_seeds = 256;
  std::uint64_t eval_seed_base = 1000000;
  bool principal_pattern_only = false;
  int eval_threads = 1;
  // Optional behavior-cloning warm start.
  int bc_epochs = 0;
  double bc_learning_rate = 1e-3;
  std::string demos_path;
  std::string out_dir;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat `key = value` lines; '#' starts a comment; `[section]` lines are
// ignored. Unknown keys and malformed values raise ConfigError naming the line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Applies `key=value` overrides on top of an existing config.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

// Every key with its resolved value; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);
std::vector<std::string> config_keys();

// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "MPPO_CONFIG";

}  // namespace mppo

#endif  // MPPO_CONFIG_HPP_
