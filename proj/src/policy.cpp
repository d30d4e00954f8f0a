#include "q2sfc/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace q2sfc {

namespace {

void check_widths(std::span<const double> q, std::span<const std::uint8_t> valid) {
  if (q.size() != valid.size()) throw std::invalid_argument("Q vector and action mask differ in width");
}

std::vector<std::size_t> valid_indices(std::span<const std::uint8_t> valid) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < valid.size(); ++j) {
    if (valid[j]) out.push_back(j);
  }
  if (out.empty()) throw std::invalid_argument("no valid action to choose from");
  return out;
}

}  // namespace

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kEpsilonGreedy: return "epsilon-greedy";
    case PolicyKind::kSoftmax: return "softmax";
    case PolicyKind::kUcb: return "ucb";
  }
  return "?";
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "epsilon-greedy" || name == "egreedy") return PolicyKind::kEpsilonGreedy;
  if (name == "softmax") return PolicyKind::kSoftmax;
  if (name == "ucb") return PolicyKind::kUcb;
  throw std::invalid_argument("unknown policy '" + name + "'");
}

double PolicyParams::epsilon_at(std::size_t episode) const {
  if (epsilon_decay_episodes == 0) return epsilon;
  if (episode >= epsilon_decay_episodes) return epsilon_final;
  const double frac = static_cast<double>(episode) / static_cast<double>(epsilon_decay_episodes);
  return epsilon + (epsilon_final - epsilon) * frac;
}

void PolicyParams::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0) || !(epsilon_final >= 0.0 && epsilon_final <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("softmax temperature must be positive");
  }
}

std::size_t greedy_action(std::span<const double> q, std::span<const std::uint8_t> valid) {
  check_widths(q, valid);
  std::size_t best = valid.size();
  for (std::size_t j = 0; j < valid.size(); ++j) {
    if (valid[j] && (best == valid.size() || q[j] > q[best])) best = j;
  }
  if (best == valid.size()) throw std::invalid_argument("no valid action to choose from");
  return best;
}

std::size_t epsilon_greedy_action(std::span<const double> q, std::span<const std::uint8_t> valid,
                                  double epsilon, std::mt19937_64& rng) {
  check_widths(q, valid);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    const auto options = valid_indices(valid);
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    return options[pick(rng)];
  }
  return greedy_action(q, valid);
}

std::vector<double> softmax_probabilities(std::span<const double> q,
                                          std::span<const std::uint8_t> valid, double temperature) {
  check_widths(q, valid);
  if (!(temperature > 0.0)) throw std::invalid_argument("softmax temperature must be positive");
  const std::size_t best = greedy_action(q, valid);
  std::vector<double> p(q.size(), 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (!valid[j]) continue;
    p[j] = std::exp((q[j] - q[best]) / temperature);
    total += p[j];
  }
  for (double& x : p) x /= total;
  return p;
}

std::size_t softmax_action(std::span<const double> q, std::span<const std::uint8_t> valid,
                           double temperature, std::mt19937_64& rng) {
  const auto p = softmax_probabilities(q, valid, temperature);
  std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
  return pick(rng);
}

std::size_t ucb_action(std::span<const double> q, std::span<const std::uint8_t> valid,
                       const UcbCounts& counts) {
  check_widths(q, valid);
  if (counts.per_action.size() < valid.size()) throw std::invalid_argument("UCB counts too short");
  for (std::size_t j = 0; j < valid.size(); ++j) {
    if (valid[j] && counts.per_action[j] == 0) return j;
  }
  const double log_total = std::log(static_cast<double>(std::max<std::uint64_t>(counts.requests_solved, 1)));
  std::size_t best = valid.size();
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < valid.size(); ++j) {
    if (!valid[j]) continue;
    const double score = q[j] + std::sqrt(2.0 * log_total / static_cast<double>(counts.per_action[j]));
    if (best == valid.size() || score > best_score) {
      best = j;
      best_score = score;
    }
  }
  if (best == valid.size()) throw std::invalid_argument("no valid action to choose from");
  return best;
}

std::size_t select_action(std::span<const double> q, std::span<const std::uint8_t> valid,
                          const PolicyParams& params, std::size_t episode, std::mt19937_64& rng,
                          const UcbCounts* counts) {
  switch (params.kind) {
    case PolicyKind::kEpsilonGreedy:
      return epsilon_greedy_action(q, valid, params.epsilon_at(episode), rng);
    case PolicyKind::kSoftmax:
      return softmax_action(q, valid, params.temperature, rng);
    case PolicyKind::kUcb:
      if (counts == nullptr) throw std::invalid_argument("UCB policy needs visit counts");
      return ucb_action(q, valid, *counts);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace q2sfc
