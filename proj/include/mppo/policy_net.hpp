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

#ifndef MPPO_POLICY_NET_HPP_
#define MPPO_POLICY_NET_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mppo/engine.hpp"
#include "mppo/observation.hpp"
#include "mppo/rng.hpp"

namespace mppo {

inline constexpr int kNumActions = ActionId::kCount;

struct NetShape {
  int input = features::kSize;
  std::vector<int> hidden = {256, 128};
  bool operator==(const NetShape&) const = default;
};

// Location of one dense layer inside the flat parameter vector.
struct LayerSpec {
  std::size_t weight_offset = 0;
  std::size_t bias_offset = 0;
  int rows = 0;  // outputs
  int cols = 0;  // inputs
  bool operator==(const LayerSpec&) const = default;
};

// Parameters of a tanh MLP trunk with a masked-softmax policy head
// (kNumActions logits) and a scalar value head, stored as one flat vector:
// hidden layers in order, then the policy head, then the value head.
class PolicyParams {
 public:
  PolicyParams() : PolicyParams(NetShape{}) {}
  explicit PolicyParams(NetShape shape);  // all zeros

  // Orthogonal init (gain 5/3 on tanh layers, `policy_scale` on the policy
  // head, 1 on the value head), zero biases.
  static PolicyParams initialize(NetShape shape, std::uint64_t seed, double policy_scale = 0.01);

  const NetShape& shape() const { return shape_; }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  const LayerSpec& policy_head() const { return layers_[layers_.size() - 2]; }
  const LayerSpec& value_head() const { return layers_.back(); }
  std::size_t size() const { return data_.size(); }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool all_finite() const;

  // Checkpoint: one JSON header line (format, shape, feature layout hash,
  // parameter count) followed by little-endian IEEE-754 doubles.
  std::string serialize() const;
  static PolicyParams deserialize(const std::string& bytes);
  void save(const std::string& path) const;
  static PolicyParams load(const std::string& path);

  bool operator==(const PolicyParams&) const = default;

 private:
  NetShape shape_;
  std::vector<LayerSpec> layers_;
  std::vector<double> data_;
};

// Intermediate activations kept for the backward pass.
struct ForwardResult {
  std::array<double, kNumActions> logits{};
  std::array<double, kNumActions> probs{};  // exactly 0 on illegal actions
  double value = 0.0;
  std::vector<double> input;
  std::vector<std::vector<double>> hidden;  // post-tanh activations
  LegalMask legal;

  double log_prob(int action) const;
  double entropy() const;
};

// Throws std::invalid_argument when the mask is empty or the feature length
// does not match the network.
ForwardResult forward(const PolicyParams& params, std::span<const float> features, const LegalMask& legal);
inline ForwardResult forward(const PolicyParams& params, const EncodedObservation& obs) {
  return forward(params, obs.features, obs.legal);
}

// Accumulates scale * d(output)/d(params) into `grad`, where the output
// gradient is `dlogits` on the policy logits and `dvalue` on the value.
void backward(const PolicyParams& params, const ForwardResult& fwd, std::span<const double> dlogits, double dvalue,
              double scale, std::span<double> grad);

// Gradient of log pi(action | obs). Throws std::invalid_argument for illegal actions.
std::vector<double> grad_logprob(const PolicyParams& params, const EncodedObservation& obs, ActionId action);
std::vector<double> grad_value(const PolicyParams& params, const EncodedObservation& obs);

struct SampledAction {
  ActionId action;
  double log_prob = 0.0;
  double value = 0.0;
};

SampledAction sample_action(const PolicyParams& params, const EncodedObservation& obs, Rng& rng);
// Highest-probability legal action (lowest id on ties).
SampledAction greedy_action(const PolicyParams& params, const EncodedObservation& obs);
SampledAction sample_from(const ForwardResult& fwd, Rng& rng);
SampledAction greedy_from(const ForwardResult& fwd);

}  // namespace mppo

#endif  // MPPO_POLICY_NET_HPP_
