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

#ifndef MPPO_TESTS_ORACLES_HPP_
#define MPPO_TESTS_ORACLES_HPP_

#include <set>
#include <span>
#include <string>
#include <vector>

#include "mppo/learner.hpp"
#include "mppo/scoring.hpp"

namespace mppo::oracle {

// Canonical strings for every winning decomposition, found by a recursive
// search over set kinds in index order (independent of decompose()).
std::set<std::string> decompositions(const TileCounts& concealed, std::span<const Meld> exposed);

// The same canonical form applied to decompose() output.
std::set<std::string> canonical(const std::vector<WinningDecomposition>& ds, std::size_t n_exposed);

// Direct double sum: adv_t = sum_k (gamma lambda)^k delta_{t+k}.
std::vector<double> gae_double_sum(const std::vector<double>& rewards, const std::vector<double>& values,
                                   double gamma, double lambda);

// Finite MDP with an absorbing terminal state reached with probability
// `terminal[s][a]` from each (s, a).
struct Mdp {
  int states = 6;
  int actions = 3;
  std::vector<std::vector<std::vector<double>>> transition;  // [s][a][s']
  std::vector<std::vector<double>> terminal;                 // [s][a]
  std::vector<std::vector<double>> reward;                   // [s][a]
  std::vector<double> start;                                 // [s]
  double gamma = 0.9;
};
using TabularPolicy = std::vector<std::vector<double>>;  // [s][a]

Mdp random_mdp(std::uint64_t seed);
TabularPolicy random_policy(const Mdp& m, std::uint64_t seed);
// Exact J(pi) by solving the Bellman linear system.
double performance(const Mdp& m, const TabularPolicy& pi);
// Exact sum_t gamma^t E_{pi'}[A_pi(s_t, a_t)] via the discounted visitation of pi'.
double expected_advantage(const Mdp& m, const TabularPolicy& pi_new, const TabularPolicy& pi_old);

// Naive re-implementation of the network forward pass and the PPO loss.
struct NaiveOut {
  std::vector<double> probs;
  double value = 0.0;
};
NaiveOut naive_forward(const PolicyParams& p, const EncodedObservation& obs);
double naive_ppo_loss(std::span<const TrainSample> batch, const PolicyParams& p, const LearnerConfig& cfg);

}  // namespace mppo::oracle

#endif  // MPPO_TESTS_ORACLES_HPP_
