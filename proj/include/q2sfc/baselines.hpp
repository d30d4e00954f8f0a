#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>

#include "q2sfc/qoe_reward.hpp"
#include "q2sfc/sfc_env.hpp"
#include "q2sfc/topology.hpp"

namespace q2sfc {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchReport {
  std::optional<Chain> chain;  // qos and qoe filled in
  double qoe = 0.0;
  bool complete = false;  // a functional chain was built
  bool feasible = false;  // complete and within every constraint
  std::uint64_t chains_examined = 0;
  double wall_time_s = 0.0;
};

// Hop-by-hop uniform choice among connected successors; QoS is never looked
// at while choosing.
SearchReport random_chain(const SfcRequest& request, const OverlayGraph& g, std::mt19937_64& rng,
                          const QoeParams& qoe);

// Upper bound on the chains an exhaustive search walks: product of M_i over
// the requested types, saturating at UINT64_MAX.
std::uint64_t enumeration_size(const SfcRequest& request, const OverlayGraph& g);

// Exhaustive search over connectivity-respecting chains: best QoE among
// those meeting qcon, ties going to the lexicographically smallest slot
// sequence. Throws EnumerationCapExceeded when enumeration_size > cap.
SearchReport violent_search(const SfcRequest& request, const OverlayGraph& g, const QoeParams& qoe,
                            std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace q2sfc
