#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "q2sfc/config.hpp"
#include "q2sfc/dqn_agent.hpp"
#include "q2sfc/lldp_codec.hpp"
#include "q2sfc/topology.hpp"

namespace q2sfc {

// One server per instance, named srv<type>_<slot>. Each pair of servers
// hosting different types is joined with probability `density` by a path
// of its own 1..max_switches_per_path switches.
RawTopology generate_topology(const TopologyGenConfig& cfg, std::uint64_t seed);

// Loads cfg.topology_file when set, otherwise generates from cfg.topology.
RawTopology experiment_topology(const ExperimentConfig& cfg);
SfcEnv make_env(const ExperimentConfig& cfg, const OverlayGraph& g);

struct CompareRow {
  std::size_t episode = 0;
  double dqn_qoe = 0.0;
  double random_qoe = 0.0;
  std::optional<double> violent_qoe;  // absent when no request fit the enumeration cap
  double dqn_violation_rate = 0.0;
  double random_violation_rate = 0.0;
};

struct MethodSummary {
  std::string method;
  double mean_time_s = 0.0;
  std::size_t timed_requests = 0;
  double heldout_qoe = 0.0;  // mean over complete chains of the held-out set
  double heldout_violation_rate = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<EpisodeMetrics> metrics;
  std::vector<MethodSummary> summary;  // Random, Violent, DQN
  QNetwork network;
  std::size_t violent_skipped = 0;  // requests over the enumeration cap
};

// Trains the agent and, on every episode's requests, runs random and
// exhaustive search against the unmodified topology. Afterwards all three
// are timed and scored on a held-out request set.
CompareResult run_compare(const ExperimentConfig& cfg, const OverlayGraph& g);

// CSV writers. Each file opens with a schema comment and the materialized
// config, so a run can be reproduced from its output alone.
void write_compare_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<CompareRow>& rows);
void write_metrics_csv(std::ostream& out, const ExperimentConfig& cfg,
                       const std::vector<EpisodeMetrics>& metrics);
void write_summary_csv(std::ostream& out, const ExperimentConfig& cfg,
                       const std::vector<MethodSummary>& summary);
void write_evaluation_csv(std::ostream& out, const ExperimentConfig& cfg, const OverlayGraph& g,
                          const std::vector<SfcRequest>& requests,
                          const std::vector<EvaluationRecord>& records);

// Frame corpora: one "<scheme> <hex ethernet frame>" per line, '#' comments.
std::vector<lldp::CapturedFrame> read_frame_corpus(std::istream& in);
void write_frame_corpus(std::ostream& out, const std::vector<lldp::CapturedFrame>& frames);

// Per-device discovery frames for a topology under two schemes: "lldp"
// (plain) and "qos" (with the QoS TLV), each interleaved with
// `data_frames_per_device` non-discovery frames.
std::vector<lldp::CapturedFrame> generate_frame_corpus(const RawTopology& raw, std::uint64_t seed,
                                                       std::size_t data_frames_per_device = 8);

struct FrameCheck {
  std::size_t index = 0;
  bool ok = false;
  std::string message;
};

// Parses every discovery frame, rebuilds it and compares bytes. Frames of
// `qos_scheme` must also carry a decodable QoS TLV: a QoS TLV whose org code
// or subtype got corrupted parses as some other organisation's TLV, so only
// this expectation catches it.
std::vector<FrameCheck> roundtrip_corpus(const std::vector<lldp::CapturedFrame>& frames,
                                         const std::string& qos_scheme = "qos");
// Human-readable description of each frame.
void dump_corpus(std::ostream& out, const std::vector<lldp::CapturedFrame>& frames);
void write_overhead_report(std::ostream& out, const std::vector<lldp::OverheadRow>& rows);
// Applies every QoS-carrying frame to the topology; returns how many matched a device.
std::size_t refresh_topology(RawTopology& raw, const std::vector<lldp::CapturedFrame>& frames);

}  // namespace q2sfc
