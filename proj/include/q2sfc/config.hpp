#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "q2sfc/dqn_agent.hpp"
#include "q2sfc/policy.hpp"
#include "q2sfc/qoe_reward.hpp"
#include "q2sfc/request_gen.hpp"
#include "q2sfc/sfc_env.hpp"

namespace q2sfc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Range = std::array<double, 2>;  // closed [lo, hi]

// Uniform sampling ranges for one QoS record.
struct QosRanges {
  Range dl{100.0, 2000.0};
  Range bw{100.0, 1000.0};
  Range pl{0.0, 0.01};
  Range av{0.95, 1.0};
  Range jt{10.0, 200.0};
};

struct TopologyGenConfig {
  std::size_t types = 4;
  std::size_t instances_per_type = 4;
  // Probability that two servers hosting different types get a forwarding path.
  double density = 1.0;
  // Share of instances declared potential, each on a server with one spare slot.
  double potential_fraction = 0.25;
  std::size_t max_switches_per_path = 2;
  QosRanges node_qos;
  QosRanges device_qos{{50.0, 1000.0}, {100.0, 1000.0}, {0.0, 0.005}, {0.99, 1.0}, {5.0, 100.0}};

  void validate() const;
};

struct EvaluationConfig {
  std::size_t requests = 200;  // held-out requests for greedy evaluation
  std::uint64_t enumeration_cap = 10'000'000;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;        // mandatory in files
  std::string topology_file;     // empty: generate from `topology`
  std::string output_dir = ".";
  TopologyGenConfig topology;
  QoeParams qoe;
  RewardParams reward;
  EnvConfig env;
  TrainConfig train;
  PolicyParams policy;
  RequestGenConfig requests;
  EvaluationConfig evaluation;

  void validate() const;
};

// Strict: unknown keys and type mismatches are errors; absent keys keep
// their defaults; `seed` must be present.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
// Fully materialized config, keys sorted, one line.
std::string config_to_json(const ExperimentConfig& cfg);

// Independent seed streams derived from the experiment seed.
enum class SeedStream : std::uint64_t { kTopology = 1, kTrainRequests, kTraining, kRandomBaseline, kHeldOut };
std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream);

}  // namespace q2sfc
