#pragma once

// Hand-computed reward fixtures, shared by the unit tests and the
// acceptance run.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "q2sfc/qoe_reward.hpp"
#include "q2sfc/topology.hpp"

namespace reward_fixtures {

struct Fixture {
  std::string name;
  double got;
  double want;
};

inline q2sfc::Chain chain_of(std::vector<q2sfc::Selection> sel, q2sfc::QosVector qos = {}) {
  q2sfc::Chain c;
  c.selections = std::move(sel);
  c.qos = qos;
  return c;
}

// qcon = {bw 100, av 0.5, dl 10, pl 0.1, jt 5}; this qos sits at normalized
// distance exactly 1 (bw slack 0.6, dl slack -0.8) while satisfying qcon.
inline q2sfc::QosVector unit_distance_qos() { return {160.0, 0.5, 2.0, 0.1, 5.0}; }
inline q2sfc::QosVector fixture_qcon() { return {100.0, 0.5, 10.0, 0.1, 5.0}; }

inline std::vector<Fixture> all() {
  using namespace q2sfc;
  const double e = std::numbers::e;
  std::vector<Fixture> out;
  const QoeParams p;  // gamma=alpha=beta_p=1, theta=0, alpha_n=gamma_n=1, beta_n=theta_n=0

  out.push_back({"wfl at zero", qoe_positive(0.0, p), 0.0});
  out.push_back({"wfl at e-1", qoe_positive(e - 1.0, p), 1.0});
  out.push_back({"iqx at zero", qoe_negative(0.0, p), 1.0});
  out.push_back({"iqx at one", qoe_negative(1.0, p), e});

  QoeParams two = p;
  two.weights = {1.0, 1.0};
  two.positive_count = 1;
  const double pair[] = {e - 1.0, 0.0};
  out.push_back({"chain qoe, one positive and one negative metric", chain_qoe(pair, two), 0.0});

  QoeParams zero = p;
  zero.weights.assign(kMetricCount, 0.0);
  const QosVector any = {5, 0.9, 100, 0.01, 3};
  out.push_back({"chain qoe, zero weights", chain_qoe(any, zero), 0.0});

  {
    // Two instances with node delay 3 and 4 joined by a link of delay 25.
    QosMetrics n1, n2, l;
    n1.dl = 3;
    n2.dl = 4;
    l.dl = 25;
    std::vector<OverlayGraph::InstanceSpec> specs = {{"a", 0, 0, InstanceStatus::kDeployed, n1},
                                                     {"b", 1, 1, InstanceStatus::kDeployed, n2}};
    const OverlayGraph g({"A", "B"}, {{"s0", 0}, {"s1", 0}}, specs, {AggregatedLink(0, 1, {l})});
    const Chain c = chain_of({{0, 0, false}, {1, 1, false}});
    out.push_back({"chain delay over one link", chain_qos(c, g)[index(Metric::kDelay)], 32.0});
  }

  RewardParams rp;
  rp.penalty = 50.0;
  const QosVector qcon = fixture_qcon();
  QosVector violated = qcon;
  violated[index(Metric::kJitter)] = 5.5;
  out.push_back({"penalty on a single violation", qos_penalty(violated, qcon, 2, rp), 50.0});
  QosVector low_bw = qcon;
  low_bw[index(Metric::kBandwidth)] = 99.0;
  out.push_back({"penalty on a positive-metric violation", qos_penalty(low_bw, qcon, 2, rp), 50.0});
  out.push_back({"penalty at the boundary", qos_penalty(qcon, qcon, 2, rp), 50.0});
  out.push_back({"normalized distance", normalized_distance(unit_distance_qos(), qcon), 1.0});
  out.push_back({"penalty at distance one", qos_penalty(unit_distance_qos(), qcon, 2, rp), 50.0 / e});

  RewardParams opex;
  opex.opex_normal = 1.0;
  opex.opex_vm = {5.0, 5.0};
  opex.opex_vnf = {2.0, 2.0};
  out.push_back({"opex of three deployed instances",
                 opex_penalty(chain_of({{0, 0, false}, {1, 1, false}, {2, 0, false}}), opex), 3.0});
  out.push_back({"opex of one potential instance", opex_penalty(chain_of({{0, 1, true}}), opex), 8.0});
  out.push_back({"opex of an empty chain", opex_penalty(Chain{}, opex), 0.0});

  {
    // QoE gain 10, QoS penalty 3 (violated), OPEX 2.
    QoeParams gain = p;
    gain.weights = {10.0, 0, 0, 0, 0};
    RewardParams r;
    r.penalty = 3.0;
    r.opex_normal = 1.0;
    const QosVector qos = {e - 1.0, 0, 0, 0, 0};
    const QosVector con = {e, 0, 0, 0, 0};
    const Chain c = chain_of({{0, 0, false}, {1, 1, false}}, qos);
    const RewardBreakdown b = chain_reward(c, con, gain, r);
    out.push_back({"reward decomposition: gain", b.qoe, 10.0});
    out.push_back({"reward decomposition: qos penalty", b.qos_penalty, 3.0});
    out.push_back({"reward decomposition: opex", b.opex_penalty, 2.0});
    out.push_back({"reward decomposition: total", b.reward, 5.0});
  }
  {
    RewardParams r;
    r.penalty = 50.0;
    r.opex_normal = 0.0;
    const Chain c = chain_of({{0, 0, false}}, unit_distance_qos());
    out.push_back({"reward with zero qoe and opex", chain_reward(c, qcon, zero, r).reward, -50.0 / e});
  }

  out.push_back({"distribute 10 over 5", distribute_reward(10.0, 5), 2.0});
  out.push_back({"distribute 6 over 3", distribute_reward(6.0, 3), 2.0});
  out.push_back({"distribute -P over 1", distribute_reward(-50.0, 1), -50.0});
  return out;
}

}  // namespace reward_fixtures
