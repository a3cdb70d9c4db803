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

#ifndef MPPO_SHANTEN_HPP_
#define MPPO_SHANTEN_HPP_

#include "mppo/tile.hpp"

namespace mppo::shanten {

// Exchanges needed to reach `sets_needed` sets plus a pair. -1 means the
// tiles already form such a hand (for 3k+2 tile counts); 0 is ready.
int normal(const TileCounts& counts, int sets_needed);

// Seven pairs; four of a kind counts as two pairs.
int seven_pairs(const TileCounts& counts);

int thirteen_orphans(const TileCounts& counts);

}  // namespace mppo::shanten

#endif  // MPPO_SHANTEN_HPP_
