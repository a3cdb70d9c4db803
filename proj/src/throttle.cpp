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

#include "mppo/throttle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mppo {

ConGenThrottle::ConGenThrottle(double lo, double hi, int window) : lo_(lo), hi_(hi), window_(window) {
  if (!(0.0 < lo && lo <= hi && hi <= 1.0)) throw std::invalid_argument("throttle band must satisfy 0 < lo <= hi <= 1");
  if (window <= 0) throw std::invalid_argument("throttle window must be positive");
}

void ConGenThrottle::record(double consumed, double generated, double elapsed) {
  cycles_.push_back({consumed, generated, elapsed});
  while (cycles_.size() > window_) cycles_.pop_front();
}

double ConGenThrottle::ratio() const {
  double c = 0.0, g = 0.0;
  for (const Cycle& x : cycles_) {
    c += x.consumed;
    g += x.generated;
  }
  return g > 0.0 ? c / g : 0.0;
}

double ConGenThrottle::generation_rate() const {
  double g = 0.0, t = 0.0;
  for (const Cycle& x : cycles_) {
    g += x.generated;
    t += x.elapsed;
  }
  return t > 0.0 ? g / t : 0.0;
}

double ConGenThrottle::next_pause(double batch, double busy) const {
  const double rate = generation_rate();
  if (rate <= 0.0) return 0.0;
  const double mid = 0.5 * (lo_ + hi_);
  double period = batch / (rate * mid);
  // Lean against residual drift of the windowed ratio.
  const double r = ratio();
  if (r > 0.0) period *= std::clamp(r / mid, 0.8, 1.25);
  return std::max(0.0, period - busy);
}

}  // namespace mppo
