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

#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "mppo/rng.hpp"

namespace mppo::oracle {
namespace {

struct SetKind {
  bool chow;
  int base;
};

std::vector<SetKind> all_set_kinds() {
  std::vector<SetKind> v;
  for (int i = 0; i < kNumTileKinds; ++i) v.push_back({false, i});
  for (int s = 0; s < 3; ++s) {
    for (int r = 0; r < 7; ++r) v.push_back({true, s * 9 + r});
  }
  return v;
}

bool take(TileCounts& c, const SetKind& k, int sign) {
  const int idx[3] = {k.base, k.chow ? k.base + 1 : k.base, k.chow ? k.base + 2 : k.base};
  for (int i : idx) c[i] = static_cast<std::uint8_t>(c[i] - sign);
  for (int i : idx) {
    if (c[i] > 4) return false;  // wrapped below zero
  }
  return true;
}

void search(TileCounts& c, const std::vector<SetKind>& kinds, std::size_t from, int need, std::vector<SetKind>& cur,
            std::vector<std::vector<SetKind>>& out) {
  if (need == 0) {
    if (std::all_of(c.begin(), c.end(), [](auto x) { return x == 0; })) out.push_back(cur);
    return;
  }
  for (std::size_t k = from; k < kinds.size(); ++k) {
    const bool ok = take(c, kinds[k], 1);
    if (ok) {
      cur.push_back(kinds[k]);
      search(c, kinds, k, need - 1, cur, out);
      cur.pop_back();
    }
    take(c, kinds[k], -1);
  }
}

std::string set_string(std::vector<std::pair<int, int>> sets) {
  std::sort(sets.begin(), sets.end());
  std::ostringstream os;
  for (auto [chow, base] : sets) os << (chow ? 'C' : 'P') << base << ' ';
  return os.str();
}

// All suit permutations for the 147 / 258 / 369 runs.
std::vector<std::array<int, 3>> perms() {
  std::array<int, 3> p{0, 1, 2};
  std::vector<std::array<int, 3>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int> knit_tiles(const std::array<int, 3>& perm) {
  std::vector<int> v;
  for (int g = 0; g < 3; ++g) {
    for (int r = g; r < 9; r += 3) v.push_back(perm[g] * 9 + r);
  }
  return v;
}

std::string perm_string(const std::array<int, 3>& p) {
  return std::to_string(p[0]) + std::to_string(p[1]) + std::to_string(p[2]);
}

void pair_sets(const TileCounts& c, int need, const std::string& prefix, std::set<std::string>& out) {
  static const auto kinds = all_set_kinds();
  for (int p = 0; p < kNumTileKinds; ++p) {
    if (c[p] < 2) continue;
    TileCounts rest = c;
    rest[p] -= 2;
    std::vector<std::vector<SetKind>> found;
    std::vector<SetKind> cur;
    search(rest, kinds, 0, need, cur, found);
    for (const auto& f : found) {
      std::vector<std::pair<int, int>> sets;
      for (const SetKind& k : f) sets.push_back({k.chow, k.base});
      out.insert(prefix + set_string(sets) + "pair" + std::to_string(p));
    }
  }
}

}  // namespace

std::set<std::string> decompositions(const TileCounts& concealed, std::span<const Meld> exposed) {
  std::set<std::string> out;
  int total = 0;
  for (auto x : concealed) total += x;
  if (exposed.size() > 4 || total + 3 * static_cast<int>(exposed.size()) != 14) return out;
  const int need = 4 - static_cast<int>(exposed.size());
  pair_sets(concealed, need, "GWP|", out);
  if (exposed.empty()) {
    bool even = true;
    for (auto x : concealed) even = even && x % 2 == 0;
    if (even) out.insert("7P");
    const int orphans[13] = {0, 8, 9, 17, 18, 26, 27, 28, 29, 30, 31, 32, 33};
    int have = 0, pair = -1;
    for (int i : orphans) {
      if (concealed[i] >= 1) ++have;
      if (concealed[i] == 2) pair = i;
    }
    if (have == 13 && total == 14 && pair >= 0) {
      bool clean = true;
      for (int i = 0; i < kNumTileKinds; ++i) {
        if (std::find(std::begin(orphans), std::end(orphans), i) == std::end(orphans) && concealed[i]) clean = false;
      }
      if (clean) out.insert("13O|pair" + std::to_string(pair));
    }
  }
  if (exposed.size() <= 1) {
    for (const auto& p : perms()) {
      TileCounts rest = concealed;
      bool ok = true;
      for (int i : knit_tiles(p)) {
        if (rest[i] == 0) ok = false;
        else --rest[i];
      }
      if (ok) pair_sets(rest, 1 - static_cast<int>(exposed.size()), "KS" + perm_string(p) + "|", out);
    }
  }
  if (exposed.empty()) {
    for (const auto& p : perms()) {
      const auto kt = knit_tiles(p);
      bool ok = true;
      for (int i = 0; i < kNumTileKinds; ++i) {
        if (concealed[i] > 1) ok = false;
        if (concealed[i] == 1 && i < 27 && std::find(kt.begin(), kt.end(), i) == kt.end()) ok = false;
      }
      if (ok) out.insert("LK" + perm_string(p));
    }
  }
  return out;
}

std::set<std::string> canonical(const std::vector<WinningDecomposition>& ds, std::size_t n_exposed) {
  std::set<std::string> out;
  for (const WinningDecomposition& d : ds) {
    std::array<int, 3> perm{};
    for (int g = 0; g < 3; ++g) perm[g] = static_cast<int>(d.knit[g]);
    std::vector<std::pair<int, int>> sets;
    for (std::size_t i = 0; i + n_exposed < d.melds.size(); ++i) {
      sets.push_back({d.melds[i].is_chow(), d.melds[i].base().index()});
    }
    switch (d.special) {
      case SpecialShape::None:
        out.insert("GWP|" + set_string(sets) + "pair" + std::to_string(d.pair->index()));
        break;
      case SpecialShape::SevenPairs:
        out.insert("7P");
        break;
      case SpecialShape::ThirteenOrphans:
        out.insert("13O|pair" + std::to_string(d.pair->index()));
        break;
      case SpecialShape::KnittedStraight:
        out.insert("KS" + perm_string(perm) + "|" + set_string(sets) + "pair" + std::to_string(d.pair->index()));
        break;
      case SpecialShape::LesserKnitted:
        out.insert("LK" + perm_string(perm));
        break;
    }
  }
  return out;
}

std::vector<double> gae_double_sum(const std::vector<double>& r, const std::vector<double>& v, double gamma,
                                   double lambda) {
  const std::size_t n = r.size();
  std::vector<double> delta(n), adv(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) delta[t] = r[t] + gamma * (t + 1 < n ? v[t + 1] : 0.0) - v[t];
  for (std::size_t t = 0; t < n; ++t) {
    double w = 1.0;
    for (std::size_t k = t; k < n; ++k) {
      adv[t] += w * delta[k];
      w *= gamma * lambda;
    }
  }
  return adv;
}

Mdp random_mdp(std::uint64_t seed) {
  Rng rng(seed);
  Mdp m;
  m.transition.assign(m.states, std::vector<std::vector<double>>(m.actions, std::vector<double>(m.states)));
  m.terminal.assign(m.states, std::vector<double>(m.actions));
  m.reward.assign(m.states, std::vector<double>(m.actions));
  m.start.assign(m.states, 0.0);
  for (int s = 0; s < m.states; ++s) {
    for (int a = 0; a < m.actions; ++a) {
      double sum = 0.0;
      const double term = 0.05 + 0.3 * uniform_unit(rng);
      for (double& p : m.transition[s][a]) sum += (p = uniform_unit(rng) + 1e-3);
      for (double& p : m.transition[s][a]) p = p / sum * (1.0 - term);
      m.terminal[s][a] = term;
      m.reward[s][a] = 2.0 * uniform_unit(rng) - 1.0;
    }
  }
  double sum = 0.0;
  for (double& p : m.start) sum += (p = uniform_unit(rng) + 1e-3);
  for (double& p : m.start) p /= sum;
  return m;
}

TabularPolicy random_policy(const Mdp& m, std::uint64_t seed) {
  Rng rng(seed);
  TabularPolicy pi(m.states, std::vector<double>(m.actions));
  for (auto& row : pi) {
    double sum = 0.0;
    for (double& p : row) sum += (p = uniform_unit(rng) + 1e-3);
    for (double& p : row) p /= sum;
  }
  return pi;
}

namespace {

// V_pi solving V = r_pi + gamma P_pi V.
Eigen::VectorXd state_values(const Mdp& m, const TabularPolicy& pi) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m.states, m.states);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m.states);
  for (int s = 0; s < m.states; ++s) {
    for (int act = 0; act < m.actions; ++act) {
      b(s) += pi[s][act] * m.reward[s][act];
      for (int t = 0; t < m.states; ++t) a(s, t) -= m.gamma * pi[s][act] * m.transition[s][act][t];
    }
  }
  return a.partialPivLu().solve(b);
}

}  // namespace

double performance(const Mdp& m, const TabularPolicy& pi) {
  const Eigen::VectorXd v = state_values(m, pi);
  double j = 0.0;
  for (int s = 0; s < m.states; ++s) j += m.start[s] * v(s);
  return j;
}

double expected_advantage(const Mdp& m, const TabularPolicy& pi_new, const TabularPolicy& pi_old) {
  const Eigen::VectorXd v = state_values(m, pi_old);
  // Discounted visitation d = mu^T (I - gamma P_new)^-1.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m.states, m.states);
  for (int s = 0; s < m.states; ++s) {
    for (int act = 0; act < m.actions; ++act) {
      for (int t = 0; t < m.states; ++t) a(s, t) -= m.gamma * pi_new[s][act] * m.transition[s][act][t];
    }
  }
  Eigen::VectorXd mu(m.states);
  for (int s = 0; s < m.states; ++s) mu(s) = m.start[s];
  const Eigen::VectorXd d = a.transpose().partialPivLu().solve(mu);
  double total = 0.0;
  for (int s = 0; s < m.states; ++s) {
    for (int act = 0; act < m.actions; ++act) {
      double q = m.reward[s][act];
      for (int t = 0; t < m.states; ++t) q += m.gamma * m.transition[s][act][t] * v(t);
      total += d(s) * pi_new[s][act] * (q - v(s));
    }
  }
  return total;
}

NaiveOut naive_forward(const PolicyParams& p, const EncodedObservation& obs) {
  const auto data = p.data();
  std::vector<double> x(obs.features.begin(), obs.features.end());
  const auto& layers = p.layers();
  auto dense = [&](const LayerSpec& l, const std::vector<double>& in) {
    std::vector<double> out(l.rows);
    for (int r = 0; r < l.rows; ++r) {
      long double acc = data[l.bias_offset + r];
      for (int c = 0; c < l.cols; ++c) acc += static_cast<long double>(data[l.weight_offset + r * l.cols + c]) * in[c];
      out[r] = static_cast<double>(acc);
    }
    return out;
  };
  for (std::size_t i = 0; i + 2 < layers.size(); ++i) {
    x = dense(layers[i], x);
    for (double& v : x) v = std::tanh(v);
  }
  const auto logits = dense(p.policy_head(), x);
  NaiveOut out;
  out.value = dense(p.value_head(), x)[0];
  double z = 0.0;
  out.probs.assign(logits.size(), 0.0);
  for (std::size_t a = 0; a < logits.size(); ++a) {
    if (obs.legal.test(a)) z += std::exp(logits[a]);
  }
  for (std::size_t a = 0; a < logits.size(); ++a) {
    if (obs.legal.test(a)) out.probs[a] = std::exp(logits[a]) / z;
  }
  return out;
}

double naive_ppo_loss(std::span<const TrainSample> batch, const PolicyParams& p, const LearnerConfig& cfg) {
  double pol = 0.0, val = 0.0, ent = 0.0;
  for (const TrainSample& s : batch) {
    const NaiveOut o = naive_forward(p, s.obs);
    const double ratio = o.probs[s.action.value()] / std::exp(s.behavior_log_prob);
    const double lo = 1.0 - cfg.clip_epsilon, hi = 1.0 + cfg.clip_epsilon;
    pol += std::min(ratio * s.advantage, std::min(std::max(ratio, lo), hi) * s.advantage);
    val += (o.value - s.value_target) * (o.value - s.value_target);
    for (double q : o.probs) {
      if (q > 0) ent -= q * std::log(q);
    }
  }
  const double n = static_cast<double>(batch.size());
  return -pol / n + cfg.value_coef * val / n - cfg.entropy_coef * ent / n;
}

}  // namespace mppo::oracle
