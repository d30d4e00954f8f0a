#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "q2sfc/baselines.hpp"
#include "q2sfc/request_gen.hpp"
#include "test_util.hpp"

using namespace q2sfc;

namespace {

QoeParams qoe() {
  QoeParams p;
  p.theta_n = -1.0;
  p.scales = {0.1, 1, 1e-4, 10, 1e-3};
  return p;
}

// Fully meshed servers, one instance each.
OverlayGraph mesh(std::size_t types, std::size_t per_type, std::mt19937_64& rng) {
  RawTopology raw;
  for (std::size_t t = 0; t < types; ++t) raw.types.push_back("T" + std::to_string(t));
  for (std::size_t t = 0; t < types; ++t) {
    for (std::size_t j = 0; j < per_type; ++j) {
      const std::string id = std::to_string(t) + "_" + std::to_string(j);
      raw.servers.push_back({"s" + id, 0});
      raw.instances.push_back({"i" + id, raw.types[t], "s" + id, InstanceStatus::kDeployed,
                               test_util::random_qos(rng)});
    }
  }
  for (std::size_t a = 0; a < raw.servers.size(); ++a) {
    for (std::size_t b = a + 1; b < raw.servers.size(); ++b) {
      raw.links.push_back({"", raw.servers[a].name, raw.servers[b].name, test_util::random_qos(rng)});
    }
  }
  return simplify(raw);
}

struct Best {
  bool found = false;
  double qoe = 0.0;
  std::vector<std::size_t> slots;
  std::uint64_t complete = 0;
};

// Odometer over every slot tuple; QoS from the extended-precision oracle.
Best brute_force(const SfcRequest& req, const OverlayGraph& g, const QoeParams& p) {
  Best best;
  std::vector<std::size_t> slot(req.length(), 0);
  while (true) {
    std::vector<std::size_t> inst;
    for (std::size_t i = 0; i < req.length(); ++i) inst.push_back(g.instance_at(req.functions[i], slot[i]));
    bool ok = true;
    std::vector<QosMetrics> devices;
    for (std::size_t i = 0; i < inst.size() && ok; ++i) {
      if (i > 0) {
        ok = g.connected(inst[i - 1], inst[i]);
        if (!ok) break;
        devices.push_back(g.hop_qos(inst[i - 1], inst[i]));
      }
      devices.push_back(g.instances()[inst[i]].node_qos);
    }
    if (ok) {
      ++best.complete;
      const auto o = test_util::oracle_aggregate(devices);
      const std::vector<double> v = {double(o.bw), double(o.av), double(o.dl), double(o.pl), double(o.jt)};
      bool meets = v[0] >= req.qcon[0] && v[1] >= req.qcon[1];
      for (std::size_t t = 2; t < 5; ++t) meets = meets && v[t] <= req.qcon[t];
      if (meets) {
        const double q = chain_qoe(v, p);
        if (!best.found || q > best.qoe + 1e-12) {
          best.found = true;
          best.qoe = q;
          best.slots = slot;
        }
      }
    }
    std::size_t i = req.length();
    while (i > 0) {
      --i;
      if (++slot[i] < g.types()[req.functions[i]].instance_count) break;
      slot[i] = 0;
      if (i == 0) return best;
    }
  }
}

}  // namespace

TEST_CASE("random search picks uniformly among successors") {
  std::mt19937_64 rng(1);
  const OverlayGraph g = mesh(2, 2, rng);
  SfcRequest req;
  req.functions = {0, 1};
  req.qcon = {0, 0, 1e18, 1, 1e18};
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> hits;
  const std::size_t n = 40'000;
  for (std::size_t i = 0; i < n; ++i) {
    const SearchReport r = random_chain(req, g, rng, qoe());
    REQUIRE(r.complete);
    CHECK(r.feasible);
    ++hits[{r.chain->selections[0].instance, r.chain->selections[1].instance}];
  }
  CHECK(hits.size() == 4);
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (const auto& [k, v] : hits) CHECK(std::fabs(static_cast<double>(v) - n * 0.25) <= 3 * sigma);
}

TEST_CASE("exhaustive search agrees with an independent enumerator") {
  std::mt19937_64 rng(21);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const OverlayGraph g = trial % 2 ? mesh(3, 3, rng) : simplify(test_util::random_fabric(rng, 3, 3, 0.5));
    SfcRequest req;
    req.functions = {0, 1, 2};
    std::shuffle(req.functions.begin(), req.functions.end(), rng);
    const SearchReport ref = random_chain(req, g, rng, qoe());
    if (!ref.complete) continue;
    std::uniform_real_distribution<double> slack(-0.2, 0.3);
    for (std::size_t t = 0; t < kMetricCount; ++t) {
      const double u = slack(rng);
      req.qcon[t] = t < kPositiveMetricCount ? ref.chain->qos[t] * (1 - u) : ref.chain->qos[t] * (1 + u);
    }
    const SearchReport got = violent_search(req, g, qoe());
    const Best want = brute_force(req, g, qoe());
    CHECK(got.chains_examined == want.complete);
    CHECK(got.feasible == want.found);
    if (!want.found) {
      ++infeasible;
      CHECK_FALSE(got.chain.has_value());
      continue;
    }
    ++feasible;
    CHECK(test_util::rel_close(got.qoe, want.qoe, 1e-9));
    // Any chain the search returns must itself meet every constraint.
    CHECK_FALSE(violates_constraints(got.chain->qos, req.qcon, kPositiveMetricCount));
  }
  CHECK(feasible > 10);
  CHECK(infeasible > 0);
}

TEST_CASE("exhaustive search reports an infeasible request") {
  std::mt19937_64 rng(2);
  const OverlayGraph g = mesh(2, 2, rng);
  SfcRequest req;
  req.functions = {1, 0};
  req.qcon = {1e9, 1.0, 0.0, 0.0, 0.0};
  const SearchReport r = violent_search(req, g, qoe());
  CHECK_FALSE(r.feasible);
  CHECK(r.complete);
  CHECK_FALSE(r.chain.has_value());
  CHECK(r.chains_examined <= 4);
}

TEST_CASE("enumeration cap") {
  std::mt19937_64 rng(3);
  const OverlayGraph g = mesh(3, 4, rng);
  SfcRequest req;
  req.functions = {0, 1, 2};
  req.qcon = {0, 0, 1e18, 1, 1e18};
  CHECK(enumeration_size(req, g) == 64);
  CHECK_THROWS_AS(violent_search(req, g, qoe(), 63), EnumerationCapExceeded);
  CHECK(violent_search(req, g, qoe(), 64).chains_examined == 64);
}

TEST_CASE("search on a disconnected graph") {
  RawTopology raw;
  raw.types = {"A", "B"};
  raw.servers = {{"s0", 0}, {"s1", 0}};
  raw.instances = {{"a", "A", "s0", InstanceStatus::kDeployed, {}}, {"b", "B", "s1", InstanceStatus::kDeployed, {}}};
  const OverlayGraph g = simplify(raw);
  SfcRequest req;
  req.functions = {0, 1};
  req.qcon = {0, 0, 1e18, 1, 1e18};
  const SearchReport v = violent_search(req, g, qoe());
  CHECK_FALSE(v.complete);
  CHECK(v.chains_examined == 0);
  std::mt19937_64 rng(4);
  const SearchReport r = random_chain(req, g, rng, qoe());
  CHECK_FALSE(r.complete);
  CHECK_FALSE(r.feasible);
}

TEST_CASE("generated requests are feasible and follow type order") {
  std::mt19937_64 rng(5);
  const OverlayGraph g = mesh(4, 3, rng);
  RequestGenConfig cfg;
  cfg.min_length = 2;
  RequestGenerator gen(g, qoe(), cfg, 77);
  for (const SfcRequest& req : gen.batch(50)) {
    CHECK(req.length() >= 2);
    CHECK(req.length() <= 4);
    CHECK(std::is_sorted(req.functions.begin(), req.functions.end()));
    CHECK(violent_search(req, g, qoe()).feasible);
  }
  RequestGenerator a(g, qoe(), cfg, 9), b(g, qoe(), cfg, 9);
  CHECK(a.batch(10) == b.batch(10));
}
