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

#include "mppo/shanten.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>

namespace mppo::shanten {
namespace {

constexpr int kMaxSets = 4;

// best[pair][sets] = most partial blocks reachable, -1 when unreachable.
using GroupOptions = std::array<std::array<std::int8_t, kMaxSets + 1>, 2>;

void search(std::array<int, 9>& c, int len, bool sequences, int i, int sets, int blocks, int pair,
            GroupOptions& best) {
  while (i < len && c[i] == 0) ++i;
  if (i == len) {
    const int s = std::min(sets, kMaxSets);
    best[pair][s] = static_cast<std::int8_t>(std::max<int>(best[pair][s], blocks));
    return;
  }
  if (c[i] >= 3) {
    c[i] -= 3;
    search(c, len, sequences, i, sets + 1, blocks, pair, best);
    c[i] += 3;
  }
  if (sequences && i + 2 < len && c[i + 1] && c[i + 2]) {
    --c[i], --c[i + 1], --c[i + 2];
    search(c, len, sequences, i, sets + 1, blocks, pair, best);
    ++c[i], ++c[i + 1], ++c[i + 2];
  }
  if (c[i] >= 2) {
    c[i] -= 2;
    if (!pair) search(c, len, sequences, i, sets, blocks, 1, best);
    search(c, len, sequences, i, sets, blocks + 1, pair, best);
    c[i] += 2;
  }
  if (sequences && i + 1 < len && c[i + 1]) {
    --c[i], --c[i + 1];
    search(c, len, sequences, i, sets, blocks + 1, pair, best);
    ++c[i], ++c[i + 1];
  }
  if (sequences && i + 2 < len && c[i + 2]) {
    --c[i], --c[i + 2];
    search(c, len, sequences, i, sets, blocks + 1, pair, best);
    ++c[i], ++c[i + 2];
  }
  --c[i];
  search(c, len, sequences, i, sets, blocks, pair, best);
  ++c[i];
}

const GroupOptions& group_options(const TileCounts& counts, int first, int len, bool sequences) {
  thread_local std::unordered_map<std::uint32_t, GroupOptions> cache;
  std::uint32_t key = 0;
  std::array<int, 9> c{};
  for (int k = 0; k < len; ++k) {
    c[k] = std::min<int>(counts[first + k], 4);
    key = key * 5 + static_cast<std::uint32_t>(c[k]);
  }
  key = key * 2 + (sequences ? 0u : 1u);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  GroupOptions best;
  for (auto& row : best) row.fill(-1);
  search(c, len, sequences, 0, 0, 0, 0, best);
  return cache.emplace(key, best).first->second;
}

}  // namespace

int normal(const TileCounts& counts, int sets_needed) {
  // dp[pair][sets] = max partial blocks over groups processed so far.
  GroupOptions dp;
  for (auto& row : dp) row.fill(-1);
  dp[0][0] = 0;
  const std::array<std::array<int, 3>, 4> groups = {{{0, 9, 1}, {9, 9, 1}, {18, 9, 1}, {27, 7, 0}}};
  for (const auto& g : groups) {
    const GroupOptions& opt = group_options(counts, g[0], g[1], g[2] != 0);
    GroupOptions next;
    for (auto& row : next) row.fill(-1);
    for (int p = 0; p < 2; ++p) {
      for (int s = 0; s <= kMaxSets; ++s) {
        if (dp[p][s] < 0) continue;
        for (int q = 0; q + p < 2; ++q) {
          for (int u = 0; u <= kMaxSets; ++u) {
            if (opt[q][u] < 0) continue;
            const int ns = std::min(s + u, kMaxSets);
            next[p + q][ns] = static_cast<std::int8_t>(std::max<int>(next[p + q][ns], dp[p][s] + opt[q][u]));
          }
        }
      }
    }
    dp = next;
  }
  int best = 2 * sets_needed;
  for (int p = 0; p < 2; ++p) {
    for (int s = 0; s <= kMaxSets; ++s) {
      if (dp[p][s] < 0) continue;
      const int sets = std::min(s, sets_needed);
      const int blocks = std::min<int>(dp[p][s], sets_needed - sets);
      best = std::min(best, 2 * sets_needed - 2 * sets - blocks - p);
    }
  }
  return best;
}

int seven_pairs(const TileCounts& counts) {
  int pairs = 0;
  for (auto c : counts) pairs += c / 2;
  return 6 - std::min(pairs, 7);
}

int thirteen_orphans(const TileCounts& counts) {
  int kinds = 0;
  bool pair = false;
  for (int i = 0; i < kNumTileKinds; ++i) {
    if (!Tile::from_index(i).is_terminal_or_honor() || counts[i] == 0) continue;
    ++kinds;
    if (counts[i] >= 2) pair = true;
  }
  return 13 - kinds - (pair ? 1 : 0);
}

}  // namespace mppo::shanten
