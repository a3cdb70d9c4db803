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

#include <filesystem>
#include <fstream>

#include "mppo/config.hpp"

namespace mppo {
namespace {

TEST(Config, DefaultsRoundTrip) {
  const RunConfig c;
  EXPECT_EQ(to_text(parse_config(to_text(c))), to_text(c));
}

TEST(Config, ParsedValuesRoundTrip) {
  const RunConfig c = parse_config(R"(# comment
[learner]
batch_size = 256
learning_rate = 3e-4   # trailing
demo_actor_count = 2
adv_norm = false
hidden = 64, 32
demos = "data/pairs.demos"
)");
  EXPECT_EQ(c.training.learner.batch_size, 256);
  EXPECT_DOUBLE_EQ(c.training.learner.learning_rate, 3e-4);
  EXPECT_EQ(c.training.learner.demo_actor_count, 2);
  EXPECT_FALSE(c.training.learner.adv_norm);
  EXPECT_EQ(c.training.net.hidden, (std::vector<int>{64, 32}));
  EXPECT_EQ(c.demos_path, "data/pairs.demos");
  const RunConfig back = parse_config(to_text(c));
  EXPECT_EQ(to_text(back), to_text(c));
  EXPECT_EQ(back.training.learner.learning_rate, c.training.learner.learning_rate);
}

TEST(Config, UnknownKeyNamesLine) {
  try {
    parse_config("batch_size = 4\n\nbatchsize = 8\n");
    FAIL() << "no error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("batchsize"), std::string::npos) << e.what();
  }
}

TEST(Config, MalformedValues) {
  EXPECT_THROW(parse_config("batch_size = many\n"), ConfigError);
  EXPECT_THROW(parse_config("adv_norm = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("hidden = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("just words\n"), ConfigError);
}

TEST(Config, OverridesApplyOnTop) {
  RunConfig c = parse_config("seed = 3\n");
  apply_override(c, "seed", "9");
  apply_override(c, "lfd_value_all_states", "true");
  EXPECT_EQ(c.training.seed, 9u);
  EXPECT_TRUE(c.training.lfd_value_all_states);
  EXPECT_THROW(apply_override(c, "nonsense", "1"), ConfigError);
}

TEST(Config, EveryKeyAppearsInText) {
  const std::string text = to_text(RunConfig{});
  for (const std::string& k : config_keys()) EXPECT_NE(text.find(k + " = "), std::string::npos) << k;
}

TEST(Config, LoadMissingFile) {
  EXPECT_THROW(load_config("/nonexistent/mppo.toml"), ConfigError);
  const auto p = std::filesystem::temp_directory_path() / "mppo_cfg_test.toml";
  std::ofstream(p) << "learner_steps = 12\n";
  EXPECT_EQ(load_config(p.string()).training.learner_steps, 12);
  std::filesystem::remove(p);
}

}  // namespace
}  // namespace mppo
