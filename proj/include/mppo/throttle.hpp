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

#ifndef MPPO_THROTTLE_HPP_
#define MPPO_THROTTLE_HPP_

#include <deque>

namespace mppo {

// Keeps the learner's consumed/generated sample ratio inside [lo, hi] by
// choosing how long the learner pauses between steps. Time units are the
// caller's (virtual or seconds).
class ConGenThrottle {
 public:
  ConGenThrottle(double lo, double hi, int window = 16);

  // One learner cycle: samples taken, samples produced by actors, and the
  // cycle's total duration including pauses and waits.
  void record(double consumed, double generated, double elapsed);

  // consumed / generated over the window; 0 before anything is generated.
  double ratio() const;
  double generation_rate() const;

  // Pause before the next step so that consuming `batch` samples after
  // `busy` time units of work lands the ratio at the middle of the band.
  double next_pause(double batch, double busy) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  struct Cycle {
    double consumed, generated, elapsed;
  };
  double lo_, hi_;
  std::size_t window_;
  std::deque<Cycle> cycles_;
};

}  // namespace mppo

#endif  // MPPO_THROTTLE_HPP_
