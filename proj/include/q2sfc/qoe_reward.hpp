#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "q2sfc/qos.hpp"
#include "q2sfc/topology.hpp"

namespace q2sfc {

inline constexpr double kNormFloor = 1e-9;       // floor on |qcon| when normalizing slack
inline constexpr double kExponentClamp = 700.0;  // saturation point of the IQX exponent

// Constants of the QoS -> QoE mappings. Each metric t is multiplied by
// scales[t] (1 when absent) before mapping, which lets a configuration pick
// the unit the constants are tuned for, e.g. delay in ms while the topology
// stores us.
struct QoeParams {
  double alpha_p = 1.0;
  double beta_p = 1.0;
  double gamma_p = 1.0;
  double theta_p = 0.0;
  double alpha_n = 1.0;
  double beta_n = 0.0;
  double gamma_n = 1.0;
  double theta_n = 0.0;
  std::vector<double> weights = std::vector<double>(kMetricCount, 1.0);
  std::vector<double> scales;
  std::size_t positive_count = kPositiveMetricCount;  // K

  std::size_t metric_count() const { return weights.size(); }  // L
  double scale(std::size_t t) const { return t < scales.size() ? scales[t] : 1.0; }
  void validate() const;
};

struct RewardParams {
  double penalty = 100.0;  // P
  double opex_normal = 1.0;
  std::vector<double> opex_vm;   // per VNF type; missing entries count as 0
  std::vector<double> opex_vnf;  // per VNF type; missing entries count as 0

  double opex_vm_for(std::size_t type) const;
  double opex_vnf_for(std::size_t type) const;
  void validate() const;
};

struct Selection {
  std::size_t instance = 0;
  std::size_t type = 0;
  bool was_potential = false;  // status at the moment it was selected

  friend bool operator==(const Selection&, const Selection&) = default;
};

// One instance per requested function, in request order. Partial while an
// episode is still running.
struct Chain {
  std::vector<Selection> selections;
  QosVector qos{};
  double qoe = 0.0;
  double reward = 0.0;

  std::size_t size() const { return selections.size(); }
  bool empty() const { return selections.empty(); }
};

// End-to-end QoS along node, link, node, ... for the selected instances.
QosVector chain_qos(const Chain& chain, const OverlayGraph& g);

// WFL mapping for metrics where larger is better.
double qoe_positive(double qos, const QoeParams& p);
// IQX mapping for metrics where smaller is better.
double qoe_negative(double qos, const QoeParams& p);

// Weighted sum of positive-metric QoE minus weighted sum of negative-metric
// QoE. This is also the QoE gain of the chain.
double chain_qoe(std::span<const double> qos, const QoeParams& p);

bool violates_constraints(std::span<const double> qos, std::span<const double> qcon,
                          std::size_t positive_count);
double normalized_distance(std::span<const double> qos, std::span<const double> qcon);
double qos_penalty(std::span<const double> qos, std::span<const double> qcon,
                   std::size_t positive_count, const RewardParams& rp);
double opex_penalty(const Chain& chain, const RewardParams& rp);

struct RewardBreakdown {
  double qoe = 0.0;
  double qos_penalty = 0.0;
  double opex_penalty = 0.0;
  double reward = 0.0;
};

// Uses chain.qos as already computed.
RewardBreakdown chain_reward(const Chain& chain, std::span<const double> qcon, const QoeParams& p,
                             const RewardParams& rp);

// r_c spread evenly over the n selected instances.
double distribute_reward(double chain_reward, std::size_t n);

}  // namespace q2sfc
