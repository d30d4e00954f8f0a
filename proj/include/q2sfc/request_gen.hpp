#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "q2sfc/qoe_reward.hpp"
#include "q2sfc/sfc_env.hpp"
#include "q2sfc/topology.hpp"

namespace q2sfc {

struct RequestGenConfig {
  std::size_t min_length = 2;
  std::size_t max_length = 0;  // 0 means every type
  // Constraints loosen a randomly built reference chain's QoS by a factor
  // drawn uniformly from [slack_min, slack_max]: positive metrics shrink by
  // it, negative metrics grow by it.
  double slack_min = 0.0;
  double slack_max = 0.3;
  // Exhaustive feasibility check when the request's enumeration size fits.
  std::uint64_t verify_cap = 100'000;
  std::size_t max_attempts = 1000;
};

// Draws requests whose function sequence is an ordered random subset of the
// topology's types and whose constraints admit at least one chain.
class RequestGenerator {
 public:
  RequestGenerator(const OverlayGraph& g, QoeParams qoe, RequestGenConfig config, std::uint64_t seed);

  SfcRequest next();
  std::vector<SfcRequest> batch(std::size_t count);

 private:
  const OverlayGraph& g_;
  QoeParams qoe_;
  RequestGenConfig config_;
  std::mt19937_64 rng_;
};

}  // namespace q2sfc
