#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "q2sfc/lldp_codec.hpp"
#include "q2sfc/topology.hpp"
#include "test_util.hpp"

using namespace q2sfc;

namespace {

QosMetrics q(double dl, double bw, double pl, double av, double jt) { return QosMetrics{dl, bw, pl, av, jt}; }

// Server s1 hosts a type-A instance, s2 hosts three
// type-B instances; two switches in between with a choice of parallel links.
RawTopology two_switch_layout() {
  RawTopology raw;
  raw.types = {"A", "B"};
  raw.servers = {{"s1", 0}, {"s2", 0}};
  raw.switches = {{"sw1", q(5, 1000, 0, 1, 1)}, {"sw2", q(5, 1000, 0, 1, 1)}};
  raw.links = {
      {"l1", "s1", "sw1", q(5, 100, 0.001, 0.999, 1)},
      {"l2a", "sw1", "sw2", q(1, 50, 0, 1, 0)},     // narrow but fast
      {"l2b", "sw1", "sw2", q(40, 400, 0, 1, 0)},   // wide, slow
      {"l2c", "sw1", "sw2", q(10, 400, 0, 1, 0)},   // as wide, faster: chosen
      {"l3", "sw2", "s2", q(5, 250, 0.002, 0.998, 2)},
  };
  raw.instances = {
      {"v1", "A", "s1", InstanceStatus::kDeployed, q(3, 900, 0, 1, 1)},
      {"v2", "B", "s2", InstanceStatus::kDeployed, q(4, 900, 0, 1, 1)},
      {"v3", "B", "s2", InstanceStatus::kDeployed, q(4, 900, 0, 1, 1)},
      {"v4", "B", "s2", InstanceStatus::kDeployed, q(4, 900, 0, 1, 1)},
  };
  return raw;
}

}  // namespace

TEST_CASE("aggregation fixtures") {
  const QosMetrics single = q(7, 42, 0.3, 0.9, 2);
  CHECK(aggregate_link(std::vector<QosMetrics>{single}) == single);

  const auto two = aggregate_link(std::vector<QosMetrics>{q(10, 100, 0.1, 0.99, 1), q(15, 250, 0.1, 0.99, 2)});
  CHECK(two.dl == 25.0);
  CHECK(two.bw == 100.0);
  CHECK(two.pl == doctest::Approx(0.19).epsilon(1e-14));
  CHECK(two.av == doctest::Approx(0.9801).epsilon(1e-14));
  CHECK(two.jt == 3.0);

  CHECK_THROWS_AS(aggregate_link(std::vector<QosMetrics>{}), TopologyError);
}

TEST_CASE("aggregation matches an independent long double evaluation") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto chain = test_util::random_devices(rng, 1 + rng() % 8);
    const QosMetrics got = aggregate_link(chain);
    const test_util::Oracle want = test_util::oracle_aggregate(chain);
    CHECK(test_util::rel_close(got.dl, want.dl, 1e-12));
    CHECK(test_util::rel_close(got.bw, want.bw, 1e-12));
    CHECK(test_util::rel_close(got.pl, want.pl, 1e-12));
    CHECK(test_util::rel_close(got.av, want.av, 1e-12));
    CHECK(test_util::rel_close(got.jt, want.jt, 1e-12));
  }
}

TEST_CASE("aggregation is associative and monotone") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = test_util::random_devices(rng, 1 + rng() % 5);
    const auto b = test_util::random_devices(rng, 1 + rng() % 5);
    std::vector<QosMetrics> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const QosMetrics whole = aggregate_link(ab);
    const QosMetrics split = aggregate_link(std::vector<QosMetrics>{aggregate_link(a), aggregate_link(b)});
    CHECK(test_util::close_qos(whole, split, 1e-12));
    CHECK(test_util::close_qos(compose(aggregate_link(a), aggregate_link(b)), whole, 1e-12));

    const QosMetrics shorter = aggregate_link(a);
    CHECK(whole.dl >= shorter.dl);
    CHECK(whole.pl >= shorter.pl);
    CHECK(whole.jt >= shorter.jt);
    CHECK(whole.bw <= shorter.bw);
    CHECK(whole.av <= shorter.av);
  }
}

TEST_CASE("loss composition keeps precision for tiny probabilities") {
  const auto agg = aggregate_link(std::vector<QosMetrics>{q(0, 1, 1e-17, 1, 0), q(0, 1, 1e-17, 1, 0)});
  CHECK(agg.pl == doctest::Approx(2e-17).epsilon(1e-12));
}

TEST_CASE("simplify collapses the switch fabric into one aggregated link") {
  const OverlayGraph g = simplify(two_switch_layout());
  REQUIRE(g.links().size() == 1);
  const std::size_t v1 = *g.find_instance("v1");
  for (const char* name : {"v2", "v3", "v4"}) {
    const std::size_t k = *g.find_instance(name);
    CHECK(g.connected(v1, k));
    CHECK(g.connected(k, v1));
  }
  // Same server: mutually reachable over an identity hop.
  CHECK(g.connected(*g.find_instance("v2"), *g.find_instance("v3")));
  CHECK(g.hop_qos(*g.find_instance("v2"), *g.find_instance("v3")) == QosMetrics{});

  const AggregatedLink& link = g.links()[0];
  REQUIRE(link.device_chain().size() == 5);  // l1, sw1, l2c, sw2, l3
  CHECK(link.device_chain()[2].dl == 10.0);
  CHECK(link.qos().bw == 100.0);
  CHECK(link.qos().dl == 5 + 5 + 10 + 5 + 5);
  CHECK(link.qos() == aggregate_link(link.device_chain()));
  CHECK(g.hop_qos(v1, *g.find_instance("v4")) == link.qos());
}

TEST_CASE("path choice prefers the widest bottleneck over delay") {
  RawTopology raw = two_switch_layout();
  raw.links[0].qos.bw = 1000;
  raw.links[4].qos.bw = 1000;
  const OverlayGraph g = simplify(raw);
  // Now l2b/l2c (400) beat l2a (50); l2c is faster.
  CHECK(g.links()[0].qos().bw == 400.0);
  CHECK(g.links()[0].device_chain()[2].dl == 10.0);
}

TEST_CASE("direct server link with identity QoS") {
  RawTopology raw;
  raw.types = {"A", "B"};
  raw.servers = {{"s1", 0}, {"s2", 0}};
  raw.links = {{"", "s1", "s2", QosMetrics{}}};
  raw.instances = {{"a", "A", "s1", InstanceStatus::kDeployed, {}}, {"b", "B", "s2", InstanceStatus::kDeployed, {}}};
  const OverlayGraph g = simplify(raw);
  REQUIRE(g.links().size() == 1);
  const QosMetrics id = g.links()[0].qos();
  CHECK(id.dl == 0.0);
  CHECK(id.pl == 0.0);
  CHECK(id.av == 1.0);
  CHECK(id.jt == 0.0);
  CHECK(std::isinf(id.bw));
}

TEST_CASE("servers never forward") {
  RawTopology raw;
  raw.types = {"A", "B", "C"};
  raw.servers = {{"s1", 0}, {"s2", 0}, {"s3", 0}};
  raw.links = {{"", "s1", "s2", q(1, 10, 0, 1, 0)}, {"", "s2", "s3", q(1, 10, 0, 1, 0)}};
  raw.instances = {{"a", "A", "s1", InstanceStatus::kDeployed, {}},
                   {"b", "B", "s2", InstanceStatus::kDeployed, {}},
                   {"c", "C", "s3", InstanceStatus::kDeployed, {}}};
  const OverlayGraph g = simplify(raw);
  CHECK(g.links().size() == 2);
  CHECK(g.servers_connected(0, 1));
  CHECK(g.servers_connected(1, 2));
  CHECK_FALSE(g.servers_connected(0, 2));
  CHECK(successors(g, *g.find_instance("a"), 2).empty());
  CHECK_THROWS_AS(g.hop_qos(*g.find_instance("a"), *g.find_instance("c")), TopologyError);
}

TEST_CASE("successors and potential instances") {
  RawTopology raw;
  raw.types = {"A", "B"};
  raw.servers = {{"s1", 0}, {"s2", 2}, {"s3", 0}, {"iso", 0}};
  raw.links = {{"", "s1", "s2", q(1, 10, 0, 1, 0)}, {"", "s1", "s3", q(1, 10, 0, 1, 0)}};
  raw.instances = {
      {"a", "A", "s1", InstanceStatus::kDeployed, {}},
      {"b0", "B", "s2", InstanceStatus::kPotential, {}},
      {"b1", "B", "s2", InstanceStatus::kPotential, {}},
      {"b2", "B", "s3", InstanceStatus::kDeployed, {}},
      {"a_iso", "A", "iso", InstanceStatus::kDeployed, {}},
  };
  OverlayGraph g = simplify(raw);
  const std::size_t a = *g.find_instance("a");

  // One potential instance per server with spare capacity.
  auto next = successors(g, a, 1);
  REQUIRE(next.size() == 2);
  CHECK(g.instances()[next[0]].name == "b0");
  CHECK(g.instances()[next[1]].name == "b2");

  CHECK(successors(g, *g.find_instance("a_iso"), 1).empty());
  CHECK(successors(g, std::nullopt, 1).size() == 2);

  // Exhausting the spare slots removes the offer.
  const std::vector<std::size_t> no_spare(g.servers().size(), 0);
  CHECK(successors(g, a, 1, no_spare).size() == 1);

  const QosMetrics link_before = g.links()[0].qos();
  g.instantiate(next[0]);
  CHECK(g.instances()[next[0]].status == InstanceStatus::kDeployed);
  CHECK(g.servers()[1].spare_slots == 1);
  CHECK(g.links()[0].qos() == link_before);
  CHECK_THROWS_AS(g.instantiate(next[0]), TopologyError);

  // b0 is now deployed, b1 still offered from the remaining slot.
  next = successors(g, a, 1);
  CHECK(next.size() == 3);
  g.instantiate(*g.find_instance("b1"));
  CHECK(g.servers()[1].spare_slots == 0);
}

TEST_CASE("potential instance needs spare capacity") {
  RawTopology raw;
  raw.types = {"A"};
  raw.servers = {{"s1", 0}};
  raw.instances = {{"a", "A", "s1", InstanceStatus::kPotential, {}}};
  CHECK_THROWS_AS(simplify(raw), TopologyError);
}

TEST_CASE("overlay soundness on random fabrics") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const RawTopology raw = test_util::random_fabric(rng, 3, 3, 0.6);
    const OverlayGraph g = simplify(raw);
    for (std::size_t i = 0; i < g.instances().size(); ++i) {
      for (std::size_t t = 0; t < g.types().size(); ++t) {
        for (std::size_t k : successors(g, i, t)) {
          const auto& a = g.instances()[i];
          const auto& b = g.instances()[k];
          CHECK(g.instances()[k].type == t);
          if (a.server == b.server) continue;
          const AggregatedLink* link = g.link_between(a.server, b.server);
          REQUIRE(link != nullptr);
          CHECK(link->qos() == aggregate_link(link->device_chain()));
        }
      }
    }
  }
}

TEST_CASE("bandwidth consumption recomputes the aggregate") {
  OverlayGraph g = simplify(two_switch_layout());
  const std::size_t v1 = *g.find_instance("v1");
  const std::size_t v2 = *g.find_instance("v2");
  g.consume_bandwidth(v1, v2, 30);
  CHECK(g.links()[0].qos().bw == 70.0);
  CHECK(g.links()[0].qos() == aggregate_link(g.links()[0].device_chain()));
  g.consume_bandwidth(v1, v2, 1000);
  CHECK(g.links()[0].qos().bw == 0.0);
}

TEST_CASE("topology text format round-trips") {
  std::mt19937_64 rng(29);
  const RawTopology raw = test_util::random_fabric(rng, 3, 2, 0.8);
  std::stringstream text;
  write_topology(text, raw);
  const RawTopology back = read_topology(text);
  std::stringstream again;
  write_topology(again, back);
  CHECK(text.str() == again.str());
  const OverlayGraph a = simplify(raw), b = simplify(back);
  REQUIRE(a.links().size() == b.links().size());
  for (std::size_t i = 0; i < a.links().size(); ++i) CHECK(a.links()[i].qos() == b.links()[i].qos());
}

TEST_CASE("topology parser errors name the line") {
  std::istringstream bad("type A\nserver s1 spare=0\nswitch x dl=abc\n");
  CHECK_THROWS_WITH_AS(read_topology(bad), doctest::Contains("line 3"), TopologyError);
  std::istringstream unknown("frobnicate 1\n");
  CHECK_THROWS_AS(read_topology(unknown), TopologyError);
}

TEST_CASE("QoS frames refresh device records but keep availability") {
  RawTopology raw = two_switch_layout();
  lldp::LldpFrame f;
  f.chassis_id = {'s', 'w', '2'};
  f.port_id = {'p'};
  f.qos = lldp::QosTlv{77, 88, 0.25, 9};
  CHECK(raw.apply_qos_frame(f));
  CHECK(raw.switches[1].qos == q(77, 88, 0.25, 1, 9));
  f.chassis_id = {'l', '3'};
  CHECK(raw.apply_qos_frame(f));
  CHECK(raw.links[4].qos.av == 0.998);
  f.chassis_id = {'n', 'o'};
  CHECK_FALSE(raw.apply_qos_frame(f));
  f.qos.reset();
  f.chassis_id = {'s', 'w', '1'};
  CHECK_FALSE(raw.apply_qos_frame(f));
}
