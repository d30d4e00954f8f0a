#include "q2sfc/qoe_reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace q2sfc {

void QoeParams::validate() const {
  if (!scales.empty() && scales.size() != weights.size()) {
    throw std::invalid_argument("QoeParams: scales and weights must have the same length");
  }
  if (positive_count > weights.size()) {
    throw std::invalid_argument("QoeParams: K must not exceed L");
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("QoeParams: weights must be finite and >= 0");
  }
  for (double s : scales) {
    if (!std::isfinite(s) || s <= 0.0) throw std::invalid_argument("QoeParams: scales must be finite and > 0");
  }
  if (!(alpha_p > 0.0)) throw std::invalid_argument("QoeParams: alpha_p must be > 0");
  if (!(alpha_n > 0.0)) throw std::invalid_argument("QoeParams: alpha_n must be > 0");
  if (!(beta_p > 0.0)) {
    // log argument at qos = 0 must stay positive
    throw std::invalid_argument("QoeParams: beta_p must be > 0");
  }
}

double RewardParams::opex_vm_for(std::size_t type) const {
  return type < opex_vm.size() ? opex_vm[type] : 0.0;
}

double RewardParams::opex_vnf_for(std::size_t type) const {
  return type < opex_vnf.size() ? opex_vnf[type] : 0.0;
}

void RewardParams::validate() const {
  if (!(penalty > 0.0) || !std::isfinite(penalty)) throw std::invalid_argument("RewardParams: P must be > 0");
  const auto non_negative = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!non_negative(opex_normal)) throw std::invalid_argument("RewardParams: opex_normal must be >= 0");
  if (!std::all_of(opex_vm.begin(), opex_vm.end(), non_negative) ||
      !std::all_of(opex_vnf.begin(), opex_vnf.end(), non_negative)) {
    throw std::invalid_argument("RewardParams: OPEX values must be >= 0");
  }
}

QosVector chain_qos(const Chain& chain, const OverlayGraph& g) {
  if (chain.empty()) throw std::invalid_argument("chain_qos: empty chain");
  QosMetrics acc = g.instances().at(chain.selections.front().instance).node_qos;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const auto prev = chain.selections[i - 1].instance;
    const auto next = chain.selections[i].instance;
    acc = compose(acc, g.hop_qos(prev, next));
    acc = compose(acc, g.instances()[next].node_qos);
  }
  return acc.to_vector();
}

double qoe_positive(double qos, const QoeParams& p) {
  const double arg = p.alpha_p * qos + p.beta_p;
  if (!(arg > 0.0)) {
    throw std::domain_error("qoe_positive: log argument " + std::to_string(arg) + " is not positive");
  }
  return p.gamma_p * std::log(arg) + p.theta_p;
}

double qoe_negative(double qos, const QoeParams& p) {
  const double exponent = std::clamp(p.alpha_n * qos + p.beta_n, -kExponentClamp, kExponentClamp);
  return p.gamma_n * std::exp(exponent) + p.theta_n;
}

double chain_qoe(std::span<const double> qos, const QoeParams& p) {
  if (qos.size() != p.metric_count()) {
    throw std::invalid_argument("chain_qoe: QoS vector has " + std::to_string(qos.size()) +
                                " entries, expected " + std::to_string(p.metric_count()));
  }
  double total = 0.0;
  for (std::size_t t = 0; t < qos.size(); ++t) {
    const double w = p.weights[t];
    if (w == 0.0) continue;
    const double v = qos[t] * p.scale(t);
    if (t < p.positive_count) {
      total += w * qoe_positive(v, p);
    } else {
      total -= w * qoe_negative(v, p);
    }
  }
  return total;
}

bool violates_constraints(std::span<const double> qos, std::span<const double> qcon,
                          std::size_t positive_count) {
  if (qos.size() != qcon.size()) throw std::invalid_argument("QoS and constraint lengths differ");
  for (std::size_t t = 0; t < qos.size(); ++t) {
    if (t < positive_count ? qos[t] < qcon[t] : qos[t] > qcon[t]) return true;
  }
  return false;
}

double normalized_distance(std::span<const double> qos, std::span<const double> qcon) {
  if (qos.size() != qcon.size()) throw std::invalid_argument("QoS and constraint lengths differ");
  double sum = 0.0;
  for (std::size_t t = 0; t < qos.size(); ++t) {
    const double slack = (qos[t] - qcon[t]) / std::max(std::abs(qcon[t]), kNormFloor);
    sum += slack * slack;
  }
  return std::sqrt(sum);
}

double qos_penalty(std::span<const double> qos, std::span<const double> qcon,
                   std::size_t positive_count, const RewardParams& rp) {
  if (violates_constraints(qos, qcon, positive_count)) return rp.penalty;
  return rp.penalty * std::exp(-normalized_distance(qos, qcon));
}

double opex_penalty(const Chain& chain, const RewardParams& rp) {
  double total = 0.0;
  for (const auto& s : chain.selections) {
    total += rp.opex_normal;
    if (s.was_potential) total += rp.opex_vm_for(s.type) + rp.opex_vnf_for(s.type);
  }
  return total;
}

RewardBreakdown chain_reward(const Chain& chain, std::span<const double> qcon, const QoeParams& p,
                             const RewardParams& rp) {
  RewardBreakdown out;
  out.qoe = chain_qoe(chain.qos, p);
  out.qos_penalty = qos_penalty(chain.qos, qcon, p.positive_count, rp);
  out.opex_penalty = opex_penalty(chain, rp);
  out.reward = out.qoe - out.qos_penalty - out.opex_penalty;
  return out;
}

double distribute_reward(double chain_reward, std::size_t n) {
  if (n == 0) throw std::invalid_argument("distribute_reward: chain has no instances");
  return chain_reward / static_cast<double>(n);
}

}  // namespace q2sfc
