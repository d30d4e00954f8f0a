#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace q2sfc {

enum class PolicyKind { kEpsilonGreedy, kSoftmax, kUcb };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);

struct PolicyParams {
  PolicyKind kind = PolicyKind::kEpsilonGreedy;
  double epsilon = 0.1;
  // Linear decay from epsilon to epsilon_final over this many episodes; 0 keeps epsilon fixed.
  double epsilon_final = 0.1;
  std::size_t epsilon_decay_episodes = 0;
  double temperature = 1.0;  // softmax tau

  double epsilon_at(std::size_t episode) const;
  void validate() const;
};

// Selection counts of one VNF type's instances plus the number of requests
// solved so far.
struct UcbCounts {
  std::span<const std::uint64_t> per_action;
  std::uint64_t requests_solved = 0;
};

// Argmax over valid actions, lowest index on ties. Throws when nothing is valid.
std::size_t greedy_action(std::span<const double> q, std::span<const std::uint8_t> valid);

std::size_t epsilon_greedy_action(std::span<const double> q, std::span<const std::uint8_t> valid,
                                  double epsilon, std::mt19937_64& rng);
// Probabilities of the softmax over valid actions (0 for invalid ones).
std::vector<double> softmax_probabilities(std::span<const double> q,
                                          std::span<const std::uint8_t> valid, double temperature);
std::size_t softmax_action(std::span<const double> q, std::span<const std::uint8_t> valid,
                           double temperature, std::mt19937_64& rng);
// Unvisited valid actions first (lowest index), then
// argmax Q + sqrt(2 ln(requests_solved) / count).
std::size_t ucb_action(std::span<const double> q, std::span<const std::uint8_t> valid,
                       const UcbCounts& counts);

std::size_t select_action(std::span<const double> q, std::span<const std::uint8_t> valid,
                          const PolicyParams& params, std::size_t episode, std::mt19937_64& rng,
                          const UcbCounts* counts = nullptr);

// Per (type, slot) selection counts for UCB.
class VisitCounter {
 public:
  VisitCounter() = default;
  VisitCounter(std::size_t types, std::size_t slots) : counts_(types, std::vector<std::uint64_t>(slots, 0)) {}

  void record(std::size_t type, std::size_t slot) { counts_.at(type).at(slot) += 1; }
  void finish_request() { ++requests_solved_; }
  UcbCounts view(std::size_t type) const { return UcbCounts{counts_.at(type), requests_solved_}; }
  std::uint64_t requests_solved() const { return requests_solved_; }
  std::uint64_t count(std::size_t type, std::size_t slot) const { return counts_.at(type).at(slot); }

 private:
  std::vector<std::vector<std::uint64_t>> counts_;
  std::uint64_t requests_solved_ = 0;
};

}  // namespace q2sfc
