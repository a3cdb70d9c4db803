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

#include "mppo/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mppo/advantage.hpp"

namespace mppo {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("LearnerConfig: ") + what);
}

void check_finite(double v, const char* term, std::size_t index) {
  if (!std::isfinite(v)) {
    throw NumericalError(std::string("non-finite ") + term + " at sample " + std::to_string(index));
  }
}

LossBreakdown loss_impl(std::span<const TrainSample> batch, std::span<const double> old_log_probs,
                        const PolicyParams& params, const LearnerConfig& cfg, std::vector<double>* grad) {
  if (batch.empty()) throw std::invalid_argument("ppo_loss: empty batch");
  const double n = static_cast<double>(batch.size());
  const double eps = cfg.clip_epsilon;
  LossBreakdown out;
  out.samples = static_cast<int>(batch.size());
  if (grad) grad->assign(params.size(), 0.0);
  std::array<double, kNumActions> dlogits{};

  for (std::size_t i = 0; i < batch.size(); ++i) {
    const TrainSample& s = batch[i];
    if (s.source == SampleSource::Demo) ++out.demo_samples;
    const ForwardResult f = forward(params, s.obs);
    const int a = s.action.value();
    const double lp = f.log_prob(a);
    const double lp_k = old_log_probs[i];
    check_finite(lp, "log-prob", i);
    check_finite(lp_k, "behavior log-prob", i);
    const double phi = std::exp(lp - lp_k);
    const double adv = s.advantage;
    const double unclipped = phi * adv;
    const double clipped = std::clamp(phi, 1.0 - eps, 1.0 + eps) * adv;
    const bool use_unclipped = unclipped <= clipped;
    const double surrogate = use_unclipped ? unclipped : clipped;
    if (!use_unclipped) out.clip_fraction += 1.0;
    const double h = f.entropy();
    const double verr = f.value - s.value_target;
    check_finite(surrogate, "surrogate", i);
    check_finite(verr, "value error", i);
    out.policy -= surrogate / n;
    out.value += verr * verr / n;
    out.entropy += h / n;
    out.approx_kl += (lp_k - lp) / n;

    if (grad) {
      // d(-surrogate)/dz = -A phi (onehot - p) when the unclipped branch is active.
      const double coef = use_unclipped ? -adv * phi / n : 0.0;
      for (int b = 0; b < kNumActions; ++b) {
        const double p = f.probs[b];
        double d = -coef * p;
        if (p > 0.0) d += cfg.entropy_coef * p * (std::log(p) + h) / n;
        dlogits[b] = d;
      }
      dlogits[a] += coef;
      backward(params, f, dlogits, cfg.value_coef * 2.0 * verr / n, 1.0, *grad);
    }
  }
  out.clip_fraction /= n;
  out.total = out.policy + cfg.value_coef * out.value - cfg.entropy_coef * out.entropy;
  check_finite(out.total, "total loss", batch.size());
  if (grad) {
    for (std::size_t j = 0; j < grad->size(); ++j) {
      if (!std::isfinite((*grad)[j])) throw NumericalError("non-finite gradient entry " + std::to_string(j));
    }
  }
  return out;
}

}  // namespace

void LearnerConfig::validate() const {
  require(clip_epsilon > 0.0, "clip_epsilon must be > 0");
  require(entropy_coef >= 0.0, "entropy_coef must be >= 0");
  require(value_coef >= 0.0, "value_coef must be >= 0");
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(batch_size > 0, "batch_size must be > 0");
  require(minibatch_size >= 0, "minibatch_size must be >= 0");
  require(epochs_per_batch > 0, "epochs_per_batch must be > 0");
  require(demo_actor_count >= 0, "demo_actor_count must be >= 0");
  require(selfplay_actor_count >= 0, "selfplay_actor_count must be >= 0");
  require(demo_actor_count + selfplay_actor_count > 0, "at least one actor is required");
  require(0.0 <= con_gen_lo && con_gen_lo <= con_gen_hi && con_gen_hi <= 1.0, "need 0 <= con_gen_lo <= con_gen_hi <= 1");
  require(policy_freeze_steps >= 0, "policy_freeze_steps must be >= 0");
  require(gamma > 0.0 && gamma <= 1.0, "gamma must be in (0, 1]");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must be in [0, 1]");
}

LossBreakdown ppo_loss(std::span<const TrainSample> batch, const PolicyParams& params, const LearnerConfig& config,
                       std::vector<double>* grad) {
  std::vector<double> old(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) old[i] = batch[i].behavior_log_prob;
  return loss_impl(batch, old, params, config, grad);
}

LossBreakdown ppo_loss(std::span<const TrainSample> batch, const PolicyParams& params_k, const PolicyParams& params,
                       const LearnerConfig& config, std::vector<double>* grad) {
  std::vector<double> old(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    old[i] = forward(params_k, batch[i].obs).log_prob(batch[i].action.value());
  }
  return loss_impl(batch, old, params, config, grad);
}

std::vector<std::uint8_t> value_head_mask(const PolicyParams& params) {
  std::vector<std::uint8_t> mask(params.size(), 0);
  const LayerSpec& v = params.value_head();
  std::fill(mask.begin() + static_cast<std::ptrdiff_t>(v.weight_offset),
            mask.begin() + static_cast<std::ptrdiff_t>(v.bias_offset + v.rows), 1);
  return mask;
}

Learner::Learner(PolicyParams init, LearnerConfig config, std::uint64_t seed)
    : params_(std::move(init)),
      config_(config),
      adam_(params_.size(), AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8, config.max_grad_norm}),
      rng_(seed),
      freeze_mask_(value_head_mask(params_)) {
  config_.validate();
}

UpdateStats Learner::update(std::vector<TrainSample> batch) {
  if (batch.empty()) throw std::invalid_argument("Learner::update: empty batch");
  UpdateStats st;
  st.step = steps_;
  st.policy_frozen = steps_ < config_.policy_freeze_steps;
  if (config_.adv_norm && batch.size() >= 2) {
    std::vector<double> adv(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) adv[i] = batch[i].advantage;
    normalize_advantages(adv);
    for (std::size_t i = 0; i < batch.size(); ++i) batch[i].advantage = adv[i];
  }
  int demo = 0;
  for (const TrainSample& s : batch) demo += s.source == SampleSource::Demo;
  st.beta = static_cast<double>(demo) / static_cast<double>(batch.size());

  const std::size_t mb = config_.minibatch_size > 0
                             ? std::min<std::size_t>(config_.minibatch_size, batch.size())
                             : batch.size();
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad;
  std::vector<TrainSample> chunk;
  int evals = 0;
  LossBreakdown acc;
  const std::span<const std::uint8_t> mask =
      st.policy_frozen ? std::span<const std::uint8_t>(freeze_mask_) : std::span<const std::uint8_t>();
  for (int epoch = 0; epoch < config_.epochs_per_batch; ++epoch) {
    if (mb < batch.size()) {
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng_, i)]);
    }
    for (std::size_t start = 0; start < batch.size(); start += mb) {
      const std::size_t end = std::min(batch.size(), start + mb);
      chunk.clear();
      for (std::size_t i = start; i < end; ++i) chunk.push_back(batch[order[i]]);
      const LossBreakdown l = ppo_loss(chunk, params_, config_, &grad);
      st.grad_norm = adam_.step(params_.data(), grad, mask);
      if (!params_.all_finite()) throw NumericalError("non-finite parameter after update " + std::to_string(steps_));
      acc.total += l.total;
      acc.policy += l.policy;
      acc.value += l.value;
      acc.entropy += l.entropy;
      acc.clip_fraction += l.clip_fraction;
      acc.approx_kl += l.approx_kl;
      ++evals;
    }
  }
  acc.total /= evals;
  acc.policy /= evals;
  acc.value /= evals;
  acc.entropy /= evals;
  acc.clip_fraction /= evals;
  acc.approx_kl /= evals;
  acc.samples = static_cast<int>(batch.size());
  acc.demo_samples = demo;
  st.loss = acc;
  ++steps_;
  return st;
}

}  // namespace mppo
