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

#include "mppo/training.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <queue>
#include <thread>

#include "json.hpp"

namespace mppo {
namespace {

constexpr int kBetaWindow = 20;

class SampleQueue {
 public:
  explicit SampleQueue(std::size_t capacity) : capacity_(capacity) {}

  void push(std::vector<TrainSample>&& samples) {
    {
      std::lock_guard lock(mu_);
      for (TrainSample& s : samples) {
        ++generated_;
        if (s.source == SampleSource::Demo) ++generated_demo_;
        items_.push_back(std::move(s));
      }
      while (items_.size() > capacity_) {
        items_.pop_front();
        ++dropped_;
      }
    }
    cv_.notify_all();
  }

  bool try_pop(std::size_t n, std::vector<TrainSample>& out) {
    std::lock_guard lock(mu_);
    return pop_locked(n, out);
  }

  // Waits until n samples are available, `stop` is set, or the timeout passes.
  bool wait_pop(std::size_t n, std::vector<TrainSample>& out, std::chrono::duration<double> timeout,
                const std::atomic<bool>& stop) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return items_.size() >= n || stop.load(); });
    return pop_locked(n, out);
  }

  void wake() { cv_.notify_all(); }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }
  std::uint64_t generated() const {
    std::lock_guard lock(mu_);
    return generated_;
  }
  std::uint64_t generated_demo() const {
    std::lock_guard lock(mu_);
    return generated_demo_;
  }
  std::uint64_t dropped() const {
    std::lock_guard lock(mu_);
    return dropped_;
  }

 private:
  bool pop_locked(std::size_t n, std::vector<TrainSample>& out) {
    if (items_.size() < n) return false;
    out.clear();
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(std::move(items_.front()));
      items_.pop_front();
    }
    return true;
  }

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<TrainSample> items_;
  std::size_t capacity_;
  std::uint64_t generated_ = 0, generated_demo_ = 0, dropped_ = 0;
};

struct Actor {
  bool demo = false;
  Rng rng;
  std::uint64_t last_version = 0;
};

EpisodeOutput run_actor(Actor& actor, const Snapshot& snap, const DemoCollection* demos, const LearnerConfig& lc,
                        bool value_all_states) {
  if (snap.version < actor.last_version) throw std::logic_error("actor observed an older snapshot");
  actor.last_version = snap.version;
  if (!actor.demo) {
    const std::uint64_t seed = actor.rng();
    return selfplay_episode(snap.params, snap.version, seed, actor.rng, lc.gamma, lc.lambda);
  }
  const DemoTrajectory& t = demos->trajectories[uniform_below(actor.rng, demos->size())];
  ReplayStats rs;
  EpisodeOutput out;
  out.samples = replay_to_samples(t, snap.params, lc.gamma, lc.lambda, demos->winner_only, snap.version, &rs,
                                  value_all_states);
  out.forwards = rs.forwards;
  out.engine_steps = rs.engine_steps;
  return out;
}

// Shared learner-side bookkeeping for both schedulers.
class LearnerSide {
 public:
  LearnerSide(const TrainingConfig& cfg, PolicyParams init, const StepCallback& cb)
      : cfg_(cfg),
        learner_(std::move(init), cfg.learner, mix_seed(cfg.seed ^ 0x1ea2e2ULL)),
        throttle_(cfg.learner.con_gen_lo > 0.0 ? cfg.learner.con_gen_lo : 1e-3, std::max(cfg.learner.con_gen_hi, 1e-3)),
        cb_(cb) {}

  bool done() const { return learner_.steps() >= cfg_.learner_steps; }
  const Learner& learner() const { return learner_; }
  ConGenThrottle& throttle() { return throttle_; }

  // Runs one update and returns the new snapshot to publish.
  std::shared_ptr<const Snapshot> step(std::vector<TrainSample> batch, StepLog& log) {
    for (const TrainSample& s : batch) {
      ++consumed_;
      if (s.source == SampleSource::Demo) ++consumed_demo_;
    }
    recent_.push_back({static_cast<std::uint64_t>(batch.size()),
                       static_cast<std::uint64_t>(std::count_if(batch.begin(), batch.end(), [](const TrainSample& s) {
                         return s.source == SampleSource::Demo;
                       }))});
    if (recent_.size() > kBetaWindow) recent_.pop_front();
    log.update = learner_.update(std::move(batch));
    std::uint64_t wn = 0, wd = 0;
    for (auto [n, d] : recent_) {
      wn += n;
      wd += d;
    }
    log.beta_window = wn ? static_cast<double>(wd) / static_cast<double>(wn) : 0.0;
    log.beta_total = static_cast<double>(consumed_demo_) / static_cast<double>(consumed_);
    log.consumed = consumed_;
    log.snapshot_version = static_cast<std::uint64_t>(learner_.steps());
    auto snap = std::make_shared<Snapshot>();
    snap->version = log.snapshot_version;
    snap->params = learner_.params();
    return snap;
  }

  void finish_step(const StepLog& log, TrainingResult& result) {
    result.log.push_back(log);
    if (!cfg_.out_dir.empty() && cfg_.checkpoint_every > 0 && learner_.steps() % cfg_.checkpoint_every == 0) {
      save_checkpoint(result, "ckpt_" + std::to_string(learner_.steps()) + ".bin");
    }
    if (cb_) cb_(log);
  }

  void finalize(TrainingResult& result) {
    result.params = learner_.params();
    result.consumed = consumed_;
    result.consumed_demo = consumed_demo_;
    if (!cfg_.out_dir.empty()) save_checkpoint(result, "final.bin");
  }

 private:
  void save_checkpoint(TrainingResult& result, const std::string& name) {
    std::filesystem::create_directories(cfg_.out_dir);
    const std::string path = (std::filesystem::path(cfg_.out_dir) / name).string();
    learner_.params().save(path);
    result.checkpoints.push_back(path);
  }

  const TrainingConfig& cfg_;
  Learner learner_;
  ConGenThrottle throttle_;
  const StepCallback& cb_;
  std::uint64_t consumed_ = 0, consumed_demo_ = 0;
  std::deque<std::pair<std::uint64_t, std::uint64_t>> recent_;
};

std::vector<Actor> make_actors(const TrainingConfig& cfg, int selfplay, int demo) {
  std::vector<Actor> actors;
  for (int i = 0; i < selfplay + demo; ++i) {
    Actor a;
    a.demo = i >= selfplay;
    a.rng.seed(mix_seed(cfg.seed * 1000003ULL + static_cast<std::uint64_t>(i)));
    actors.push_back(std::move(a));
  }
  return actors;
}

void run_deterministic(const TrainingConfig& cfg, std::vector<Actor>& actors, const DemoCollection* demos,
                       LearnerSide& side, SnapshotBox& box, SampleQueue& queue, TrainingResult& result) {
  enum Kind { kPublish = 0, kActor = 1, kLearner = 2 };
  struct Event {
    double time;
    int kind;
    int index;
    bool operator>(const Event& o) const {
      if (time != o.time) return time > o.time;
      if (kind != o.kind) return kind > o.kind;
      return index > o.index;
    }
  };
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::vector<std::optional<EpisodeOutput>> in_flight(actors.size());
  std::shared_ptr<const Snapshot> pending_publish;
  for (int i = 0; i < static_cast<int>(actors.size()); ++i) events.push({0.0, kActor, i});
  events.push({0.0, kLearner, 0});

  const std::size_t batch = cfg.learner.batch_size;
  double cycle_start = 0.0;
  std::uint64_t gen_at_cycle = 0;
  double last_batch = 0.0;
  bool first_cycle = true;
  while (!side.done()) {
    const Event ev = events.top();
    events.pop();
    if (ev.kind == kPublish) {
      box.publish(pending_publish);
      pending_publish.reset();
    } else if (ev.kind == kActor) {
      Actor& a = actors[ev.index];
      if (in_flight[ev.index]) {
        queue.push(std::move(in_flight[ev.index]->samples));
        in_flight[ev.index].reset();
      }
      const auto snap = box.acquire();
      EpisodeOutput out = run_actor(a, *snap, demos, cfg.learner, cfg.lfd_value_all_states);
      const double cost = out.forwards + cfg.engine_step_cost * out.engine_steps;
      in_flight[ev.index] = std::move(out);
      events.push({ev.time + std::max(cost, 1e-9), kActor, ev.index});
    } else {
      std::vector<TrainSample> samples;
      if (!queue.try_pop(batch, samples)) {
        // Starved: retry right after the next actor completes.
        double next = ev.time;
        auto copy = events;
        while (!copy.empty()) {
          if (copy.top().kind == kActor) {
            next = copy.top().time;
            break;
          }
          copy.pop();
        }
        events.push({next, kLearner, 0});
        continue;
      }
      const std::uint64_t gen_now = queue.generated();
      if (!first_cycle) {
        side.throttle().record(last_batch, static_cast<double>(gen_now - gen_at_cycle), ev.time - cycle_start);
      }
      first_cycle = false;
      cycle_start = ev.time;
      gen_at_cycle = gen_now;
      last_batch = static_cast<double>(batch);

      StepLog log;
      pending_publish = side.step(std::move(samples), log);
      const double busy = static_cast<double>(batch) * cfg.learner.epochs_per_batch * cfg.learner_sample_cost;
      const double pause = side.throttle().next_pause(static_cast<double>(batch), busy);
      events.push({ev.time + busy, kPublish, 0});
      events.push({ev.time + busy + pause, kLearner, 0});
      log.con_gen_ratio = side.throttle().ratio();
      log.time = ev.time;
      log.pause = pause;
      log.generated = gen_now;
      log.dropped = queue.dropped();
      side.finish_step(log, result);
    }
  }
}

void run_threaded(const TrainingConfig& cfg, std::vector<Actor>& actors, const DemoCollection* demos,
                  LearnerSide& side, SnapshotBox& box, SampleQueue& queue, TrainingResult& result) {
  using Clock = std::chrono::steady_clock;
  std::atomic<bool> stop{false};
  std::mutex err_mu;
  std::exception_ptr error;
  std::vector<std::thread> threads;
  threads.reserve(actors.size());
  for (Actor& a : actors) {
    threads.emplace_back([&, ap = &a] {
      try {
        while (!stop.load()) {
          const auto snap = box.acquire();
          EpisodeOutput out = run_actor(*ap, *snap, demos, cfg.learner, cfg.lfd_value_all_states);
          if (stop.load()) break;
          queue.push(std::move(out.samples));
        }
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!error) error = std::current_exception();
        stop.store(true);
        queue.wake();
      }
    });
  }

  const auto t0 = Clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  const std::size_t batch = cfg.learner.batch_size;
  double cycle_start = 0.0;
  std::uint64_t gen_at_cycle = 0;
  bool first_cycle = true;
  try {
    while (!side.done() && !stop.load()) {
      if (cfg.time_budget_seconds > 0.0 && seconds() >= cfg.time_budget_seconds) break;
      std::vector<TrainSample> samples;
      const double wait_start = seconds();
      bool got = false;
      while (!got && !stop.load()) {
        got = queue.wait_pop(batch, samples, std::chrono::duration<double>(cfg.starvation_timeout_seconds), stop);
        if (!got && !stop.load()) {
          std::cerr << "warning: learner starved for " << seconds() - wait_start << " s, waiting for actors\n";
        }
      }
      if (!got) break;
      const double now = seconds();
      const std::uint64_t gen_now = queue.generated();
      if (!first_cycle) {
        side.throttle().record(static_cast<double>(batch), static_cast<double>(gen_now - gen_at_cycle),
                               now - cycle_start);
      }
      first_cycle = false;
      cycle_start = now;
      gen_at_cycle = gen_now;

      StepLog log;
      box.publish(side.step(std::move(samples), log));
      const double busy = seconds() - now;
      const double pause = side.throttle().next_pause(static_cast<double>(batch), busy);
      log.con_gen_ratio = side.throttle().ratio();
      log.time = now;
      log.pause = pause;
      log.generated = gen_now;
      log.dropped = queue.dropped();
      side.finish_step(log, result);
      if (pause > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(pause));
    }
  } catch (...) {
    stop.store(true);
    queue.wake();
    for (std::thread& t : threads) t.join();
    throw;
  }
  stop.store(true);
  queue.wake();
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

TrainingResult train_impl(const TrainingConfig& cfg, const DemoCollection* demos, int demo_actors,
                          const std::optional<PolicyParams>& init, const StepCallback& on_step) {
  cfg.validate();
  if (demo_actors > 0 && (!demos || demos->empty())) {
    throw std::invalid_argument("demo_actor_count > 0 requires a non-empty demonstration collection");
  }
  PolicyParams params = init ? *init : PolicyParams::initialize(cfg.net, cfg.seed, cfg.init_policy_scale);
  if (params.shape().input != features::kSize) throw std::invalid_argument("network input does not match features");

  TrainingResult result;
  auto first = std::make_shared<Snapshot>();
  first->params = params;
  SnapshotBox box(first);
  SampleQueue queue(cfg.queue_capacity > 0 ? cfg.queue_capacity : 2 * cfg.learner.batch_size);
  LearnerSide side(cfg, std::move(params), on_step);
  std::vector<Actor> actors = make_actors(cfg, cfg.learner.selfplay_actor_count, demo_actors);
  if (actors.empty()) throw std::invalid_argument("no actors configured");

  if (cfg.deterministic) {
    run_deterministic(cfg, actors, demos, side, box, queue, result);
  } else {
    run_threaded(cfg, actors, demos, side, box, queue, result);
  }
  result.generated = queue.generated();
  result.generated_demo = queue.generated_demo();
  side.finalize(result);
  return result;
}

}  // namespace

void TrainingConfig::validate() const {
  learner.validate();
  if (learner_steps < 0) throw std::invalid_argument("TrainingConfig: learner_steps must be >= 0");
  if (checkpoint_every < 0) throw std::invalid_argument("TrainingConfig: checkpoint_every must be >= 0");
  if (queue_capacity < 0) throw std::invalid_argument("TrainingConfig: queue_capacity must be >= 0");
  if (queue_capacity > 0 && queue_capacity < learner.batch_size) {
    throw std::invalid_argument("TrainingConfig: queue_capacity must be >= batch_size");
  }
  if (engine_step_cost < 0.0 || learner_sample_cost < 0.0) {
    throw std::invalid_argument("TrainingConfig: costs must be >= 0");
  }
  if (starvation_timeout_seconds <= 0.0) throw std::invalid_argument("TrainingConfig: starvation timeout must be > 0");
}

void SnapshotBox::publish(std::shared_ptr<const Snapshot> next) {
  std::lock_guard lock(mu_);
  if (current_ && next->version <= current_->version) throw std::logic_error("snapshot version must increase");
  current_ = std::move(next);
}

EpisodeOutput selfplay_episode(const PolicyParams& params, std::uint64_t version, std::uint64_t game_seed, Rng& rng,
                               double gamma, double lambda) {
  std::array<std::vector<StepRecord>, kNumSeats> steps;
  EpisodeOutput out;
  GameState s = reset(game_seed);
  while (s.phase != Phase::Finished) {
    const int seat = pending_seats(s).front();
    StepRecord r;
    r.obs = encode(observe(s, seat));
    const ForwardResult f = forward(params, r.obs);
    const SampledAction sa = sample_from(f, rng);
    r.action = sa.action;
    r.log_prob = sa.log_prob;
    r.value = sa.value;
    ++out.forwards;
    ++out.engine_steps;
    s = step(s, seat, r.action).state;
    steps[seat].push_back(std::move(r));
  }
  out.samples = build_samples(steps, s.rewards, gamma, lambda, SampleSource::SelfPlay, game_seed, version);
  return out;
}

std::string StepLog::to_json() const {
  nlohmann::json j;
  j["step"] = update.step;
  j["loss"] = update.loss.total;
  j["policy_loss"] = update.loss.policy;
  j["value_loss"] = update.loss.value;
  j["entropy"] = update.loss.entropy;
  j["clip_fraction"] = update.loss.clip_fraction;
  j["approx_kl"] = update.loss.approx_kl;
  j["grad_norm"] = update.grad_norm;
  j["policy_frozen"] = update.policy_frozen;
  j["beta_batch"] = update.beta;
  j["beta_window"] = beta_window;
  j["beta_total"] = beta_total;
  j["con_gen_ratio"] = con_gen_ratio;
  j["time"] = time;
  j["pause"] = pause;
  j["generated"] = generated;
  j["consumed"] = consumed;
  j["dropped"] = dropped;
  j["snapshot_version"] = snapshot_version;
  return j.dump();
}

TrainingResult run_training(const TrainingConfig& config, const DemoCollection& demos,
                            const std::optional<PolicyParams>& init, const StepCallback& on_step) {
  return train_impl(config, &demos, config.learner.demo_actor_count, init, on_step);
}

TrainingResult run_ppo_baseline(const TrainingConfig& config, const std::optional<PolicyParams>& init,
                                const StepCallback& on_step) {
  return train_impl(config, nullptr, 0, init, on_step);
}

PolicyParams behavior_cloning(PolicyParams params, const DemoCollection& demos, const BcConfig& config,
                              BcStats* stats) {
  std::vector<TrainSample> data;
  for (const DemoTrajectory& t : demos.trajectories) {
    if (config.winner_only && !t.winner()) continue;
    auto s = replay_to_samples(t, params, 1.0, 1.0, config.winner_only);
    for (TrainSample& x : s) data.push_back(std::move(x));
  }
  if (data.empty()) throw std::invalid_argument("behavior_cloning: no demonstration decisions");
  if (stats) stats->samples = data.size();
  Adam adam(params.size(), AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8, 1.0});
  Rng rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t mb = std::max(1, config.minibatch_size);
  std::vector<double> grad(params.size());
  std::array<double, kNumActions> dlogits{};
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
    double loss = 0.0, hits = 0.0;
    for (std::size_t start = 0; start < order.size(); start += mb) {
      const std::size_t end = std::min(order.size(), start + mb);
      const double n = static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const TrainSample& s = data[order[k]];
        const ForwardResult f = forward(params, s.obs);
        const int a = s.action.value();
        loss -= f.log_prob(a);
        hits += greedy_from(f).action == s.action;
        for (int b = 0; b < kNumActions; ++b) dlogits[b] = f.probs[b] / n;
        dlogits[a] -= 1.0 / n;
        backward(params, f, dlogits, config.value_coef * 2.0 * (f.value - s.episode_return) / n, 1.0, grad);
      }
      adam.step(params.data(), grad);
    }
    if (!params.all_finite()) throw NumericalError("behavior cloning diverged");
    if (stats) {
      stats->epoch_loss.push_back(loss / static_cast<double>(data.size()));
      stats->epoch_accuracy.push_back(hits / static_cast<double>(data.size()));
    }
  }
  return params;
}

std::vector<ProbePair> probe_pairs(const PolicyParams& params, const DemoCollection& demos, double gamma,
                                   double lambda, bool positive, std::size_t limit) {
  std::vector<ProbePair> out;
  for (const DemoTrajectory& t : demos.trajectories) {
    if (demos.winner_only && !t.winner()) continue;
    for (TrainSample& s : replay_to_samples(t, params, gamma, lambda, demos.winner_only)) {
      if (positive ? s.advantage > 0.0 : s.advantage < 0.0) {
        out.push_back({std::move(s.obs), s.action, s.advantage});
        if (out.size() >= limit) return out;
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> offline_ascent_probe(const PolicyParams& params,
                                                      const std::vector<ProbePair>& pairs, int steps,
                                                      double learning_rate, bool joint) {
  std::vector<std::vector<double>> series(steps + 1, std::vector<double>(pairs.size(), 0.0));
  std::array<double, kNumActions> dlogits{};
  auto ascend = [&](PolicyParams& p, std::span<const std::size_t> idx, std::span<const double> pi_k) {
    std::vector<double> grad(p.size(), 0.0);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const ProbePair& pr = pairs[idx[j]];
      const ForwardResult f = forward(p, pr.obs);
      const double pi = f.probs[pr.action.value()];
      // d/dz [A pi / pi_k] = A (pi / pi_k) (onehot - p)
      const double coef = pr.advantage * pi / pi_k[j];
      for (int b = 0; b < kNumActions; ++b) dlogits[b] = -coef * f.probs[b];
      dlogits[pr.action.value()] += coef;
      backward(p, f, dlogits, 0.0, 1.0, grad);
    }
    auto d = p.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += learning_rate * grad[i];
  };
  auto prob = [&](const PolicyParams& p, std::size_t i) {
    return forward(p, pairs[i].obs).probs[pairs[i].action.value()];
  };

  if (joint) {
    PolicyParams p = params;
    std::vector<std::size_t> idx(pairs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> pi_k(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) series[0][i] = pi_k[i] = prob(p, i);
    for (int s = 1; s <= steps; ++s) {
      ascend(p, idx, pi_k);
      for (std::size_t i = 0; i < pairs.size(); ++i) series[s][i] = prob(p, i);
    }
    return series;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    PolicyParams p = params;
    const std::size_t idx[1] = {i};
    const double pi_k[1] = {prob(p, i)};
    series[0][i] = pi_k[0];
    for (int s = 1; s <= steps; ++s) {
      ascend(p, idx, pi_k);
      series[s][i] = prob(p, i);
    }
  }
  return series;
}

}  // namespace mppo
