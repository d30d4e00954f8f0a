#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "q2sfc/policy.hpp"
#include "q2sfc/q_network.hpp"
#include "q2sfc/replay_memory.hpp"
#include "q2sfc/request_gen.hpp"
#include "q2sfc/sfc_env.hpp"

namespace q2sfc {

struct TrainConfig {
  double gamma = 0.9;
  double learning_rate = 1e-3;
  std::size_t minibatch_size = 32;
  std::size_t episodes = 100;
  std::size_t requests_per_episode = 100;
  std::size_t sync_period = 100;  // in gradient steps
  std::size_t replay_capacity = 10'000;
  std::vector<std::size_t> hidden_layers = {64, 64};
  std::uint64_t seed = 1;

  void validate() const;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// r, or r + gamma * max over valid next actions of Q(s_next; theta_minus).
// A non-terminal state without valid actions bootstraps nothing.
double td_target(double reward, std::span<const double> next_state, bool terminal,
                 const QNetwork& target, std::span<const std::uint8_t> valid_next, double gamma);

// One SGD step on the mean squared TD error of the batch. Returns the loss
// measured before the update. Throws DivergenceError, leaving `net`
// untouched, when the loss or gradient is not finite.
double train_step(QNetwork& net, const QNetwork& target, std::span<const Transition* const> batch,
                  const TrainConfig& cfg);

struct EpisodeMetrics {
  std::size_t episode = 0;
  double mean_qoe = 0.0;        // over complete chains
  double violation_rate = 0.0;  // dead ends and constraint violations over requests
  double mean_reward = 0.0;     // chain reward r_c, or -P on a dead end
  double loss = 0.0;            // mean minibatch loss of the episode's updates
  std::size_t updates = 0;
};

struct Rollout {
  Chain chain;
  bool complete = false;
  bool violated = false;  // dead end or a constraint missed
  RewardBreakdown breakdown;
};

// Called after every training episode with that episode's requests and the
// agent's behaviour-policy rollouts for them.
using EpisodeObserver = std::function<void(const EpisodeMetrics&, const std::vector<SfcRequest>&,
                                           const std::vector<Rollout>&)>;

struct TrainResult {
  QNetwork network;
  std::vector<EpisodeMetrics> metrics;
  std::uint64_t gradient_steps = 0;
};

QNetwork make_network(const SfcEnv& env, const std::vector<std::size_t>& hidden, std::mt19937_64& rng);

// Training loop: per episode the topology is restored, then each request is
// rolled out under the behaviour policy, its transitions are stored, and one
// minibatch update follows once the replay memory holds a full minibatch.
TrainResult train(SfcEnv& env, RequestGenerator& requests, const TrainConfig& cfg,
                  const PolicyParams& policy, const EpisodeObserver& observer = {});

struct EvaluationRecord {
  Chain chain;
  bool complete = false;
  bool violated = false;
  double wall_time_s = 0.0;
};

// Greedy rollouts, each on a freshly restored topology.
std::vector<EvaluationRecord> evaluate(const QNetwork& net, std::span<const SfcRequest> requests,
                                       SfcEnv& env);

}  // namespace q2sfc
