#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "q2sfc/qoe_reward.hpp"
#include "q2sfc/qos.hpp"
#include "q2sfc/topology.hpp"

namespace q2sfc {

struct SfcRequest {
  std::vector<std::size_t> functions;  // VNF type required at each position
  QosVector qcon{};                    // constraints, same layout as QosVector

  std::size_t length() const { return functions.size(); }
  friend bool operator==(const SfcRequest&, const SfcRequest&) = default;
};

enum class EpisodeOutcome { kRunning, kSuccess, kDeadEnd };

struct EnvState {
  std::size_t position = 0;  // number of functions already served
  Chain chain;               // qos tracks the partial chain
  SfcRequest request;
  EpisodeOutcome outcome = EpisodeOutcome::kRunning;

  bool terminal() const { return outcome != EpisodeOutcome::kRunning; }
  // Instance at the chain's end, or nullopt at the source.
  std::optional<std::size_t> endpoint() const;
};

struct Transition {
  std::vector<double> state;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  std::vector<std::uint8_t> next_valid;  // action mask of next_state
  bool terminal = false;
};

struct StepResult {
  EnvState state;
  bool terminal = false;
};

struct EnvConfig {
  std::size_t max_chain_length = 0;  // N_max; 0 means the number of VNF types
  // Bandwidth taken from every device of a traversed link per selection.
  double bandwidth_decrement_mbps = 0.0;
};

inline constexpr double kFeatureClip = 10.0;

class EnvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incremental orchestration as an episodic MDP. Actions are slot indices of
// the VNF type at the current position; the action space is padded to the
// largest M_i so every state exposes the same width.
class SfcEnv {
 public:
  SfcEnv(OverlayGraph graph, QoeParams qoe, RewardParams reward, EnvConfig config = {});

  const OverlayGraph& graph() const { return graph_; }
  const OverlayGraph& base_graph() const { return base_graph_; }
  const QoeParams& qoe_params() const { return qoe_; }
  const RewardParams& reward_params() const { return reward_; }

  std::size_t max_chain_length() const { return max_chain_length_; }
  std::size_t action_width() const { return action_width_; }  // M_max
  std::size_t state_width() const;

  // Restores the topology captured at construction (instantiations and
  // bandwidth consumption undone).
  void reset_graph();
  void validate_request(const SfcRequest& request) const;

  EnvState reset(std::uint64_t seed, const SfcRequest& request);
  std::vector<std::size_t> valid_actions(const EnvState& s) const;
  std::vector<std::uint8_t> action_mask(const EnvState& s) const;
  StepResult step(const EnvState& s, std::size_t action);

  // Back-fills rewards once the episode is over: r_c / N on success,
  // -P / N per transition on a dead end. Also stores qoe and reward on the
  // chain of `final_state`.
  RewardBreakdown finalize_episode(std::vector<Transition>& trajectory, EnvState& final_state) const;

  std::vector<double> encode_state(const EnvState& s) const;

  std::mt19937_64& rng() { return rng_; }

 private:
  std::vector<std::size_t> candidates(const EnvState& s) const;
  EpisodeOutcome outcome_after(const EnvState& s) const;

  OverlayGraph base_graph_;
  OverlayGraph graph_;
  QoeParams qoe_;
  RewardParams reward_;
  EnvConfig config_;
  std::size_t max_chain_length_ = 0;
  std::size_t action_width_ = 0;
  std::mt19937_64 rng_;
};

std::vector<SfcRequest> read_requests(std::istream& in, const OverlayGraph& g);
std::vector<SfcRequest> load_requests(const std::string& path, const OverlayGraph& g);
void write_requests(std::ostream& out, const std::vector<SfcRequest>& requests,
                    const OverlayGraph& g);

}  // namespace q2sfc
