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

#include "mppo/policy_net.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mppo/simd/kernels.hpp"

namespace mppo {
namespace {

constexpr double kTanhGain = 5.0 / 3.0;

// Fills a rows x cols block with orthonormal rows (rows <= cols) or columns
// (rows > cols) by modified Gram-Schmidt over Gaussian draws, times `gain`.
void orthogonal_fill(std::span<double> w, int rows, int cols, double gain, Rng& rng) {
  for (double& v : w) v = standard_normal(rng);
  const bool by_rows = rows <= cols;
  const int n_vec = by_rows ? rows : cols;
  const int len = by_rows ? cols : rows;
  auto at = [&](int vec, int k) -> double& {
    return by_rows ? w[static_cast<std::size_t>(vec) * cols + k] : w[static_cast<std::size_t>(k) * cols + vec];
  };
  for (int i = 0; i < n_vec; ++i) {
    for (int j = 0; j < i; ++j) {
      double d = 0.0;
      for (int k = 0; k < len; ++k) d += at(i, k) * at(j, k);
      for (int k = 0; k < len; ++k) at(i, k) -= d * at(j, k);
    }
    double norm = 0.0;
    for (int k = 0; k < len; ++k) norm += at(i, k) * at(i, k);
    norm = std::sqrt(norm);
    for (int k = 0; k < len; ++k) at(i, k) /= norm;
  }
  for (double& v : w) v *= gain;
}

void write_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((bits >> (8 * k)) & 0xff));
}

double read_le(const char* p) {
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[k])) << (8 * k);
  return std::bit_cast<double>(bits);
}

}  // namespace

PolicyParams::PolicyParams(NetShape shape) : shape_(std::move(shape)) {
  if (shape_.input <= 0 || shape_.hidden.empty()) throw std::invalid_argument("network needs input and hidden layers");
  std::size_t offset = 0;
  int in = shape_.input;
  auto add = [&](int rows, int cols) {
    LayerSpec l;
    l.rows = rows;
    l.cols = cols;
    l.weight_offset = offset;
    offset += static_cast<std::size_t>(rows) * cols;
    l.bias_offset = offset;
    offset += rows;
    layers_.push_back(l);
  };
  for (int h : shape_.hidden) {
    if (h <= 0) throw std::invalid_argument("hidden layer size must be positive");
    add(h, in);
    in = h;
  }
  add(kNumActions, in);
  add(1, in);
  data_.assign(offset, 0.0);
}

PolicyParams PolicyParams::initialize(NetShape shape, std::uint64_t seed, double policy_scale) {
  PolicyParams p(std::move(shape));
  Rng rng(seed);
  for (std::size_t i = 0; i < p.layers_.size(); ++i) {
    const LayerSpec& l = p.layers_[i];
    double gain = kTanhGain;
    if (i + 2 == p.layers_.size()) gain = policy_scale;
    if (i + 1 == p.layers_.size()) gain = 1.0;
    orthogonal_fill(std::span<double>(p.data_).subspan(l.weight_offset, static_cast<std::size_t>(l.rows) * l.cols),
                    l.rows, l.cols, gain, rng);
  }
  return p;
}

bool PolicyParams::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string PolicyParams::serialize() const {
  nlohmann::json header;
  header["format"] = "mppo-mlp";
  header["version"] = 1;
  header["input"] = shape_.input;
  header["hidden"] = shape_.hidden;
  header["actions"] = kNumActions;
  std::ostringstream hash;
  hash << "0x" << std::hex << feature_layout_hash();
  header["feature_hash"] = hash.str();
  header["count"] = data_.size();
  std::string out = header.dump();
  out.push_back('\n');
  out.reserve(out.size() + 8 * data_.size());
  for (double v : data_) write_le(out, v);
  return out;
}

PolicyParams PolicyParams::deserialize(const std::string& bytes) {
  const auto nl = bytes.find('\n');
  if (nl == std::string::npos) throw std::runtime_error("checkpoint: missing header line");
  const auto header = nlohmann::json::parse(bytes.substr(0, nl));
  if (header.value("format", "") != "mppo-mlp") throw std::runtime_error("checkpoint: unknown format");
  if (header.at("actions").get<int>() != kNumActions) throw std::runtime_error("checkpoint: action count mismatch");
  std::ostringstream hash;
  hash << "0x" << std::hex << feature_layout_hash();
  if (header.at("feature_hash").get<std::string>() != hash.str()) {
    throw std::runtime_error("checkpoint: feature layout hash mismatch");
  }
  NetShape shape;
  shape.input = header.at("input").get<int>();
  shape.hidden = header.at("hidden").get<std::vector<int>>();
  PolicyParams p(shape);
  const auto count = header.at("count").get<std::size_t>();
  if (count != p.size() || bytes.size() - nl - 1 != 8 * count) throw std::runtime_error("checkpoint: size mismatch");
  const char* body = bytes.data() + nl + 1;
  for (std::size_t i = 0; i < count; ++i) p.data_[i] = read_le(body + 8 * i);
  return p;
}

void PolicyParams::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write checkpoint " + path);
  const std::string bytes = serialize();
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

PolicyParams PolicyParams::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read checkpoint " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return deserialize(ss.str());
}

double ForwardResult::log_prob(int action) const {
  if (!legal.test(action)) return -std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kNumActions; ++a) {
    if (legal.test(a)) mx = std::max(mx, logits[a]);
  }
  double sum = 0.0;
  for (int a = 0; a < kNumActions; ++a) {
    if (legal.test(a)) sum += std::exp(logits[a] - mx);
  }
  return logits[action] - mx - std::log(sum);
}

double ForwardResult::entropy() const {
  double h = 0.0;
  for (int a = 0; a < kNumActions; ++a) {
    if (probs[a] > 0.0) h -= probs[a] * std::log(probs[a]);
  }
  return h;
}

ForwardResult forward(const PolicyParams& params, std::span<const float> features, const LegalMask& legal) {
  if (legal.none()) throw std::invalid_argument("forward: empty legal mask");
  if (static_cast<int>(features.size()) != params.shape().input) {
    throw std::invalid_argument("forward: feature length " + std::to_string(features.size()) + " != " +
                                std::to_string(params.shape().input));
  }
  const simd::Kernels& k = simd::active();
  const auto data = params.data();
  const auto& layers = params.layers();

  ForwardResult r;
  r.legal = legal;
  r.input.assign(features.begin(), features.end());
  const double* x = r.input.data();
  r.hidden.resize(layers.size() - 2);
  for (std::size_t i = 0; i + 2 < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    auto& h = r.hidden[i];
    h.resize(l.rows);
    k.gemv(data.data() + l.weight_offset, x, data.data() + l.bias_offset, h.data(), l.rows, l.cols);
    for (double& v : h) v = std::tanh(v);
    x = h.data();
  }
  const LayerSpec& ph = params.policy_head();
  k.gemv(data.data() + ph.weight_offset, x, data.data() + ph.bias_offset, r.logits.data(), ph.rows, ph.cols);
  const LayerSpec& vh = params.value_head();
  k.gemv(data.data() + vh.weight_offset, x, data.data() + vh.bias_offset, &r.value, 1, vh.cols);

  double mx = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kNumActions; ++a) {
    if (legal.test(a)) mx = std::max(mx, r.logits[a]);
  }
  double sum = 0.0;
  for (int a = 0; a < kNumActions; ++a) {
    r.probs[a] = legal.test(a) ? std::exp(r.logits[a] - mx) : 0.0;
    sum += r.probs[a];
  }
  for (double& p : r.probs) p /= sum;
  return r;
}

void backward(const PolicyParams& params, const ForwardResult& fwd, std::span<const double> dlogits, double dvalue,
              double scale, std::span<double> grad) {
  const simd::Kernels& k = simd::active();
  const auto data = params.data();
  const auto& layers = params.layers();
  const std::size_t n_hidden = layers.size() - 2;
  const std::vector<double>& top = fwd.hidden.back();

  const LayerSpec& ph = params.policy_head();
  const LayerSpec& vh = params.value_head();
  k.ger(grad.data() + ph.weight_offset, scale, dlogits.data(), top.data(), ph.rows, ph.cols);
  k.axpy(scale, dlogits.data(), grad.data() + ph.bias_offset, ph.rows);
  k.ger(grad.data() + vh.weight_offset, scale, &dvalue, top.data(), 1, vh.cols);
  grad[vh.bias_offset] += scale * dvalue;

  std::vector<double> dh(top.size());
  k.gemv_t(data.data() + ph.weight_offset, dlogits.data(), dh.data(), ph.rows, ph.cols);
  k.axpy(dvalue, data.data() + vh.weight_offset, dh.data(), vh.cols);

  std::vector<double> dprev;
  for (std::size_t i = n_hidden; i-- > 0;) {
    const LayerSpec& l = layers[i];
    const std::vector<double>& h = fwd.hidden[i];
    for (std::size_t j = 0; j < dh.size(); ++j) dh[j] *= 1.0 - h[j] * h[j];
    const double* below = i == 0 ? fwd.input.data() : fwd.hidden[i - 1].data();
    k.ger(grad.data() + l.weight_offset, scale, dh.data(), below, l.rows, l.cols);
    k.axpy(scale, dh.data(), grad.data() + l.bias_offset, l.rows);
    if (i == 0) break;
    dprev.resize(l.cols);
    k.gemv_t(data.data() + l.weight_offset, dh.data(), dprev.data(), l.rows, l.cols);
    dh.swap(dprev);
  }
}

std::vector<double> grad_logprob(const PolicyParams& params, const EncodedObservation& obs, ActionId action) {
  if (!obs.legal.test(action.value())) throw std::invalid_argument("grad_logprob: illegal action");
  const ForwardResult fwd = forward(params, obs);
  std::array<double, kNumActions> d{};
  for (int a = 0; a < kNumActions; ++a) d[a] = -fwd.probs[a];
  d[action.value()] += 1.0;
  std::vector<double> g(params.size(), 0.0);
  backward(params, fwd, d, 0.0, 1.0, g);
  return g;
}

std::vector<double> grad_value(const PolicyParams& params, const EncodedObservation& obs) {
  const ForwardResult fwd = forward(params, obs);
  std::array<double, kNumActions> d{};
  std::vector<double> g(params.size(), 0.0);
  backward(params, fwd, d, 1.0, 1.0, g);
  return g;
}

SampledAction sample_from(const ForwardResult& fwd, Rng& rng) {
  const double u = uniform_unit(rng);
  double acc = 0.0;
  int last = -1;
  for (int a = 0; a < kNumActions; ++a) {
    if (fwd.probs[a] <= 0.0) continue;
    last = a;
    acc += fwd.probs[a];
    if (u < acc) return {ActionId(a), fwd.log_prob(a), fwd.value};
  }
  // Rounding left u above the cumulative sum; fall back to the last positive entry.
  return {ActionId(last), fwd.log_prob(last), fwd.value};
}

SampledAction greedy_from(const ForwardResult& fwd) {
  int best = -1;
  for (int a = 0; a < kNumActions; ++a) {
    if (!fwd.legal.test(a)) continue;
    if (best < 0 || fwd.probs[a] > fwd.probs[best]) best = a;
  }
  return {ActionId(best), fwd.log_prob(best), fwd.value};
}

SampledAction sample_action(const PolicyParams& params, const EncodedObservation& obs, Rng& rng) {
  return sample_from(forward(params, obs), rng);
}

SampledAction greedy_action(const PolicyParams& params, const EncodedObservation& obs) {
  return greedy_from(forward(params, obs));
}

}  // namespace mppo
