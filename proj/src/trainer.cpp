#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "q2sfc/dqn_agent.hpp"

namespace q2sfc {

void TrainConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (minibatch_size == 0) throw std::invalid_argument("minibatch_size must be positive");
  if (replay_capacity == 0) throw std::invalid_argument("replay_capacity must be positive");
  if (minibatch_size > replay_capacity) {
    throw std::invalid_argument("minibatch_size must not exceed replay_capacity");
  }
  if (sync_period == 0) throw std::invalid_argument("sync_period must be positive");
  if (requests_per_episode == 0) throw std::invalid_argument("requests_per_episode must be positive");
  if (std::any_of(hidden_layers.begin(), hidden_layers.end(), [](std::size_t n) { return n == 0; })) {
    throw std::invalid_argument("hidden layer widths must be positive");
  }
}

double td_target(double reward, std::span<const double> next_state, bool terminal,
                 const QNetwork& target, std::span<const std::uint8_t> valid_next, double gamma) {
  if (terminal || gamma == 0.0) return reward;
  if (std::none_of(valid_next.begin(), valid_next.end(), [](std::uint8_t v) { return v != 0; })) {
    return reward;
  }
  const auto q = target.forward(next_state);
  if (valid_next.size() != q.size()) throw ShapeError("next-state mask width differs from network output");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (valid_next[j]) best = std::max(best, q[j]);
  }
  return reward + gamma * best;
}

double train_step(QNetwork& net, const QNetwork& target, std::span<const Transition* const> batch,
                  const TrainConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
  std::vector<TdSample> samples;
  samples.reserve(batch.size());
  for (const Transition* t : batch) {
    samples.push_back(TdSample{t->state, t->action,
                               td_target(t->reward, t->next_state, t->terminal, target, t->next_valid,
                                         cfg.gamma)});
  }
  std::vector<double> grad;
  const double loss = td_loss_and_gradient(net, samples, grad);
  if (!std::isfinite(loss) ||
      !std::all_of(grad.begin(), grad.end(), [](double g) { return std::isfinite(g); })) {
    throw DivergenceError("non-finite TD loss or gradient; step aborted");
  }
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= cfg.learning_rate * grad[i];
  return loss;
}

QNetwork make_network(const SfcEnv& env, const std::vector<std::size_t>& hidden, std::mt19937_64& rng) {
  std::vector<std::size_t> sizes;
  sizes.push_back(env.state_width());
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(env.action_width());
  return QNetwork::random(std::move(sizes), rng);
}

namespace {

// Per-request env seed, decorrelated from the training stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool chain_violates(const EnvState& s) {
  return s.outcome != EpisodeOutcome::kSuccess ||
         violates_constraints(s.chain.qos, s.request.qcon, kPositiveMetricCount);
}

}  // namespace

TrainResult train(SfcEnv& env, RequestGenerator& requests, const TrainConfig& cfg,
                  const PolicyParams& policy, const EpisodeObserver& observer) {
  cfg.validate();
  policy.validate();
  std::mt19937_64 rng(cfg.seed);
  TrainResult result;
  result.network = make_network(env, cfg.hidden_layers, rng);
  QNetwork target = result.network;
  QNetwork& net = result.network;
  ReplayMemory memory(cfg.replay_capacity);
  VisitCounter visits(env.graph().types().size(), env.action_width());
  std::uint64_t request_counter = 0;

  for (std::size_t episode = 0; episode < cfg.episodes; ++episode) {
    env.reset_graph();
    const std::vector<SfcRequest> batch = requests.batch(cfg.requests_per_episode);
    std::vector<Rollout> rollouts;
    rollouts.reserve(batch.size());
    EpisodeMetrics m;
    m.episode = episode;
    double qoe_sum = 0.0, reward_sum = 0.0, loss_sum = 0.0;
    std::size_t complete = 0, violated = 0;

    for (const SfcRequest& req : batch) {
      EnvState state = env.reset(mix_seed(cfg.seed, request_counter++), req);
      std::vector<Transition> trajectory;
      while (!state.terminal()) {
        Transition t;
        t.state = env.encode_state(state);
        const auto mask = env.action_mask(state);
        const auto q = net.forward(t.state);
        const std::size_t type = req.functions[state.position];
        const UcbCounts counts = visits.view(type);
        t.action = select_action(q, mask, policy, episode, rng, &counts);
        visits.record(type, t.action);
        StepResult next = env.step(state, t.action);
        t.next_state = env.encode_state(next.state);
        t.next_valid = env.action_mask(next.state);
        t.terminal = next.terminal;
        trajectory.push_back(std::move(t));
        state = std::move(next.state);
      }
      visits.finish_request();
      const RewardBreakdown rb = env.finalize_episode(trajectory, state);
      for (auto& t : trajectory) memory.push(std::move(t));

      Rollout r;
      r.complete = state.outcome == EpisodeOutcome::kSuccess;
      r.violated = chain_violates(state);
      r.breakdown = rb;
      r.chain = std::move(state.chain);
      if (r.complete) {
        ++complete;
        qoe_sum += r.chain.qoe;
      }
      if (r.violated) ++violated;
      reward_sum += rb.reward;
      rollouts.push_back(std::move(r));

      if (memory.size() >= cfg.minibatch_size) {
        if (result.gradient_steps % cfg.sync_period == 0) sync_target(net, target);
        const auto sample = memory.sample(cfg.minibatch_size, rng);
        loss_sum += train_step(net, target, sample, cfg);
        ++result.gradient_steps;
        ++m.updates;
      }
    }

    const double n = static_cast<double>(batch.size());
    m.mean_qoe = complete ? qoe_sum / static_cast<double>(complete) : 0.0;
    m.violation_rate = static_cast<double>(violated) / n;
    m.mean_reward = reward_sum / n;
    m.loss = m.updates ? loss_sum / static_cast<double>(m.updates) : 0.0;
    result.metrics.push_back(m);
    if (observer) observer(m, batch, rollouts);
  }
  return result;
}

std::vector<EvaluationRecord> evaluate(const QNetwork& net, std::span<const SfcRequest> requests,
                                       SfcEnv& env) {
  using Clock = std::chrono::steady_clock;
  std::vector<EvaluationRecord> out;
  out.reserve(requests.size());
  for (const SfcRequest& req : requests) {
    env.reset_graph();
    const auto start = Clock::now();
    EnvState state = env.reset(0, req);
    while (!state.terminal()) {
      const auto q = net.forward(env.encode_state(state));
      const std::size_t a = greedy_action(q, env.action_mask(state));
      state = env.step(state, a).state;
    }
    if (state.outcome == EpisodeOutcome::kSuccess) {
      state.chain.qoe = chain_qoe(state.chain.qos, env.qoe_params());
    }
    EvaluationRecord rec;
    rec.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    rec.complete = state.outcome == EpisodeOutcome::kSuccess;
    rec.violated = chain_violates(state);
    rec.chain = std::move(state.chain);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace q2sfc
