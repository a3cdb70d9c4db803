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
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Exec {
  int code = -1;
  std::string out;
};

Exec run(const std::string& args) {
  const std::string cmd = std::string(MPPO_CLI) + " " + args + " 2>/dev/null";
  Exec r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

nlohmann::json last_record(const std::string& out) {
  std::istringstream is(out);
  std::string line, last;
  while (std::getline(is, line))
    if (!line.empty()) last = line;
  return nlohmann::json::parse(last);
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / ("mppo_cli_" + name); }

TEST(Cli, ScoreThirteenOrphans) {
  const Exec r = run("score --hand 1C9C1B9B1D9DWEWSWWWNDRDGDWDW");
  ASSERT_EQ(r.code, 0);
  const auto j = last_record(r.out);
  EXPECT_TRUE(j["winning_shape"].get<bool>());
  EXPECT_GE(j["total"].get<int>(), 88);
  EXPECT_NE(r.out.find("ThirteenOrphans"), std::string::npos);
}

TEST(Cli, ScoreNonWinningIsRuntimeFailure) {
  EXPECT_EQ(run("score --hand 1C2C4C5C7C8C1B2B4B5B7B8BWEWS").code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("train --config missing.toml").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("score").code, 2);
  EXPECT_EQ(run("record-demos --teacher nobody --out /dev/null").code, 2);
  const fs::path bad = tmp("bad.toml");
  std::ofstream(bad) << "batchsize = 3\n";
  EXPECT_EQ(run("train --config " + bad.string()).code, 2);
  fs::remove(bad);
}

TEST(Cli, ReplayReprintsLoggedScores) {
  const fs::path dir = tmp("logs");
  fs::remove_all(dir);
  const fs::path demos = tmp("demos.txt");
  ASSERT_EQ(run("record-demos --teacher balanced --games 4 --seed-base 50 --out " + demos.string() +
                " --replay-logs " + dir.string())
                .code,
            0);
  int seen = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path());
    std::string seed_line, scores_line;
    std::getline(in, seed_line);
    std::getline(in, scores_line);
    ASSERT_EQ(scores_line.rfind("scores=", 0), 0u);
    const Exec r = run("replay --log " + e.path().string());
    ASSERT_EQ(r.code, 0);
    const auto j = last_record(r.out);
    EXPECT_TRUE(j["scores_match"].get<bool>());
    EXPECT_EQ(j["scores"], j["logged_scores"]);
    ++seen;
  }
  EXPECT_EQ(seen, 4);

  // A tampered header is reported.
  const fs::path first = fs::directory_iterator(dir)->path();
  std::ifstream in(first);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  const auto pos = text.find("scores=");
  text.replace(pos, text.find('\n', pos) - pos, "scores=9 9 9 9");
  std::ofstream(first) << text;
  EXPECT_EQ(run("replay --log " + first.string()).code, 1);
  fs::remove_all(dir);
  fs::remove(demos);
}

TEST(Cli, DeterministicBotDuel) {
  const Exec a = run("bot-duel --profiles balanced,claimer,pairs,random --games 6 --seed-base 3");
  const Exec b = run("bot-duel --profiles balanced,claimer,pairs,random --games 6 --seed-base 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, TinyTrainingRunEchoesConfig) {
  const fs::path out = tmp("train");
  fs::remove_all(out);
  const Exec r = run("train --baseline --out " + out.string() +
                    " --set learner_steps=2 --set batch_size=32 --set minibatch_size=32 --set hidden=8"
                    " --set selfplay_actor_count=2");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(out));
  bool echoed = false;
  for (const auto& e : fs::directory_iterator(out)) {
    std::ifstream in(e.path());
    std::stringstream ss;
    ss << in.rdbuf();
    echoed |= ss.str().find("learner_steps = 2") != std::string::npos;
  }
  EXPECT_TRUE(echoed);
  fs::remove_all(out);
}

}  // namespace
