#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "q2sfc/harness.hpp"

using namespace q2sfc;

namespace {

const char* kTinyConfig = R"({
  "seed": 11,
  "topology": {"types": 3, "instances_per_type": 3},
  "qoe": {"theta_n": -1.0, "scales": [0.1, 1.0, 0.0001, 10.0, 0.001]},
  "reward": {"penalty": 10.0, "opex_normal": 0.0},
  "train": {"episodes": 4, "requests_per_episode": 6, "minibatch_size": 4,
            "replay_capacity": 100, "sync_period": 5, "hidden_layers": [8]},
  "policy": {"kind": "epsilon-greedy", "epsilon": 0.5, "epsilon_final": 0.5},
  "requests": {"min_length": 2, "max_length": 3},
  "evaluation": {"requests": 5}
})";

std::string with(const std::string& base, const std::string& from, const std::string& to) {
  std::string s = base;
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  s.replace(at, from.size(), to);
  return s;
}

std::string compare_text(const ExperimentConfig& cfg, const CompareResult& r) {
  std::ostringstream a, b;
  write_compare_csv(a, cfg, r.rows);
  write_metrics_csv(b, cfg, r.metrics);
  return a.str() + b.str();
}

}  // namespace

TEST_CASE("config parsing is strict") {
  const ExperimentConfig cfg = parse_config(kTinyConfig);
  CHECK(cfg.seed == 11);
  CHECK(cfg.topology.types == 3);
  CHECK(cfg.train.episodes == 4);
  CHECK(cfg.train.hidden_layers == std::vector<std::size_t>{8});
  CHECK(cfg.train.seed == derive_seed(11, SeedStream::kTraining));

  CHECK_THROWS_AS(parse_config(with(kTinyConfig, "\"penalty\"", "\"penalti\"")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kTinyConfig, "\"seed\": 11,", "")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kTinyConfig, "\"episodes\": 4", "\"episodes\": \"4\"")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kTinyConfig, "\"episodes\": 4", "\"episodes\": -4")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kTinyConfig, "epsilon-greedy", "greedyish")), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"seed\": 1,"), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kTinyConfig, "\"minibatch_size\": 4", "\"minibatch_size\": 400")),
                  ConfigError);

  // The materialized form parses back to the same thing.
  const std::string json = config_to_json(cfg);
  CHECK(config_to_json(parse_config(json)) == json);
}

TEST_CASE("seed streams differ and are stable") {
  CHECK(derive_seed(1, SeedStream::kTopology) == derive_seed(1, SeedStream::kTopology));
  CHECK(derive_seed(1, SeedStream::kTopology) != derive_seed(1, SeedStream::kTraining));
  CHECK(derive_seed(1, SeedStream::kTopology) != derive_seed(2, SeedStream::kTopology));
}

TEST_CASE("topology generation") {
  TopologyGenConfig tc;
  tc.types = 10;
  tc.instances_per_type = 10;
  const RawTopology a = generate_topology(tc, 5);
  const RawTopology b = generate_topology(tc, 5);
  std::ostringstream ta, tb;
  write_topology(ta, a);
  write_topology(tb, b);
  CHECK(ta.str() == tb.str());
  CHECK(a.instances.size() == 100);
  CHECK(a.types.size() == 10);

  const OverlayGraph g = simplify(a);
  CHECK(g.max_instances_per_type() == 10);
  const auto potential = std::count_if(g.instances().begin(), g.instances().end(),
                                       [](const auto& i) { return i.status == InstanceStatus::kPotential; });
  CHECK(potential == 25);
  // Density 1 joins every pair of instances of different types.
  for (std::size_t x = 0; x < g.instances().size(); x += 7) {
    for (std::size_t y = 0; y < g.instances().size(); y += 3) {
      if (g.instances()[x].type != g.instances()[y].type) CHECK(g.connected(x, y));
    }
  }

  std::ostringstream tc2;
  write_topology(tc2, generate_topology(tc, 6));
  CHECK(tc2.str() != ta.str());

  tc.density = 0.0;
  const OverlayGraph sparse = simplify(generate_topology(tc, 5));
  CHECK(sparse.links().empty());
}

TEST_CASE("zero episodes give header-only CSVs") {
  ExperimentConfig cfg = parse_config(with(kTinyConfig, "\"episodes\": 4", "\"episodes\": 0"));
  const OverlayGraph g = simplify(experiment_topology(cfg));
  const CompareResult r = run_compare(cfg, g);
  CHECK(r.rows.empty());
  CHECK(r.metrics.empty());
  std::ostringstream out;
  write_compare_csv(out, cfg, r.rows);
  std::istringstream lines(out.str());
  std::string line, last;
  std::size_t data = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    last = line;
    ++data;
  }
  CHECK(data == 1);
  CHECK(last == "episode,dqn_qoe,random_qoe,violent_qoe,dqn_violation_rate,random_violation_rate");
}

TEST_CASE("compare is reproducible and covers every episode") {
  const ExperimentConfig cfg = parse_config(kTinyConfig);
  const OverlayGraph g = simplify(experiment_topology(cfg));
  const CompareResult a = run_compare(cfg, g);
  const CompareResult b = run_compare(cfg, g);
  CHECK(a.rows.size() == 4);
  CHECK(a.metrics.size() == 4);
  CHECK(compare_text(cfg, a) == compare_text(cfg, b));
  REQUIRE(a.summary.size() == 3);
  CHECK(a.summary[0].method == "Random");
  CHECK(a.summary[1].method == "Violent");
  CHECK(a.summary[2].method == "DQN");
  for (const auto& row : a.rows) {
    CHECK(row.violent_qoe.has_value());
    CHECK(row.dqn_violation_rate >= 0.0);
    CHECK(row.dqn_violation_rate <= 1.0);
  }

  std::ostringstream csv;
  write_compare_csv(csv, cfg, a.rows);
  CHECK(csv.str().rfind("# q2sfc compare v1\n# config {", 0) == 0);

  ExperimentConfig other = cfg;
  other.seed = 12;
  other.train.seed = derive_seed(12, SeedStream::kTraining);
  CHECK(compare_text(other, run_compare(other, g)) != compare_text(cfg, a));
}

TEST_CASE("frame corpora round-trip and expose a corrupted org code") {
  TopologyGenConfig tc;
  tc.types = 2;
  tc.instances_per_type = 2;
  const RawTopology raw = generate_topology(tc, 3);
  const auto frames = generate_frame_corpus(raw, 4, 3);
  REQUIRE_FALSE(frames.empty());

  std::stringstream text;
  write_frame_corpus(text, frames);
  const auto back = read_frame_corpus(text);
  REQUIRE(back.size() == frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(back[i].scheme == frames[i].scheme);
    CHECK(back[i].bytes == frames[i].bytes);
  }
  for (const auto& c : roundtrip_corpus(frames)) CHECK_MESSAGE(c.ok, c.message);

  // Every QoS-scheme frame rewrites its device's QoS in the topology.
  RawTopology copy = raw;
  const std::size_t applied = refresh_topology(copy, frames);
  CHECK(applied > 0);

  auto damaged = frames;
  std::size_t victim = damaged.size();
  for (std::size_t i = 0; i < damaged.size() && victim == damaged.size(); ++i) {
    auto& b = damaged[i].bytes;
    const std::vector<std::uint8_t> needle = {0x00, 0xAB, 0xCD, lldp::kQosSubtype};
    const auto at = std::search(b.begin(), b.end(), needle.begin(), needle.end());
    if (damaged[i].scheme == "qos" && at != b.end()) {
      *(at + 1) ^= 0x40;
      victim = i;
    }
  }
  REQUIRE(victim < damaged.size());
  std::size_t failures = 0;
  for (const auto& c : roundtrip_corpus(damaged)) {
    if (!c.ok) {
      ++failures;
      CHECK(c.index == victim);
    }
  }
  CHECK(failures == 1);

  std::istringstream junk("qos zz\n");
  CHECK_THROWS(read_frame_corpus(junk));
}

TEST_CASE("overhead report over a generated corpus") {
  TopologyGenConfig tc;
  tc.types = 2;
  tc.instances_per_type = 2;
  const auto frames = generate_frame_corpus(generate_topology(tc, 3), 4, 5);
  const auto rows = lldp::overhead_report(frames);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].lldp_packets == rows[1].lldp_packets);
  CHECK(rows[1].lldp_bytes - rows[0].lldp_bytes == rows[0].lldp_packets * lldp::kQosTlvSize);
  std::ostringstream out;
  write_overhead_report(out, rows);
  CHECK(out.str().find("qos") != std::string::npos);
}
