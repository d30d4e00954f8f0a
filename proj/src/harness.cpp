#include "q2sfc/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "q2sfc/baselines.hpp"
#include "q2sfc/request_gen.hpp"

namespace q2sfc {

namespace {

double draw(const Range& r, std::mt19937_64& rng) {
  if (r[0] == r[1]) return r[0];
  return std::uniform_real_distribution<double>(r[0], r[1])(rng);
}

QosMetrics draw_qos(const QosRanges& r, std::mt19937_64& rng) {
  QosMetrics q;
  q.dl = draw(r.dl, rng);
  q.bw = draw(r.bw, rng);
  q.pl = draw(r.pl, rng);
  q.av = draw(r.av, rng);
  q.jt = draw(r.jt, rng);
  return q;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_header(std::ostream& out, const char* schema, const ExperimentConfig& cfg) {
  out << "# q2sfc " << schema << " v1\n";
  out << "# config " << config_to_json(cfg) << "\n";
  out << "# qcon: each request loosens the QoS of a random reference chain by a uniform slack\n";
}

double mean_or_zero(double sum, std::size_t n) { return n ? sum / static_cast<double>(n) : 0.0; }

}  // namespace

RawTopology generate_topology(const TopologyGenConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  RawTopology raw;
  const std::size_t total = cfg.types * cfg.instances_per_type;
  for (std::size_t t = 0; t < cfg.types; ++t) raw.types.push_back("vnf" + std::to_string(t));

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  const auto potential_count =
      static_cast<std::size_t>(std::llround(cfg.potential_fraction * static_cast<double>(total)));
  std::vector<std::size_t> potential;
  std::sample(order.begin(), order.end(), std::back_inserter(potential), potential_count, rng);
  std::vector<bool> is_potential(total, false);
  for (std::size_t k : potential) is_potential[k] = true;

  for (std::size_t t = 0; t < cfg.types; ++t) {
    for (std::size_t j = 0; j < cfg.instances_per_type; ++j) {
      const std::size_t k = t * cfg.instances_per_type + j;
      const std::string suffix = std::to_string(t) + "_" + std::to_string(j);
      raw.servers.push_back(Server{"srv" + suffix, is_potential[k] ? 1u : 0u});
      RawInstance inst;
      inst.name = "ins" + suffix;
      inst.type = raw.types[t];
      inst.server = "srv" + suffix;
      inst.status = is_potential[k] ? InstanceStatus::kPotential : InstanceStatus::kDeployed;
      inst.node_qos = draw_qos(cfg.node_qos, rng);
      raw.instances.push_back(std::move(inst));
    }
  }

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> hops(1, cfg.max_switches_per_path);
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = a + 1; b < total; ++b) {
      if (a / cfg.instances_per_type == b / cfg.instances_per_type) continue;
      if (!(coin(rng) < cfg.density)) continue;
      const std::string pair = std::to_string(a) + "_" + std::to_string(b);
      const std::size_t n = hops(rng);
      std::string prev = raw.servers[a].name;
      for (std::size_t s = 0; s <= n; ++s) {
        std::string next;
        if (s < n) {
          next = "sw" + pair + "_" + std::to_string(s);
          raw.switches.push_back(RawSwitch{next, draw_qos(cfg.device_qos, rng)});
        } else {
          next = raw.servers[b].name;
        }
        raw.links.push_back(
            RawLink{"ln" + pair + "_" + std::to_string(s), prev, next, draw_qos(cfg.device_qos, rng)});
        prev = next;
      }
    }
  }
  return raw;
}

RawTopology experiment_topology(const ExperimentConfig& cfg) {
  if (!cfg.topology_file.empty()) return load_topology(cfg.topology_file);
  return generate_topology(cfg.topology, derive_seed(cfg.seed, SeedStream::kTopology));
}

SfcEnv make_env(const ExperimentConfig& cfg, const OverlayGraph& g) {
  return SfcEnv(g, cfg.qoe, cfg.reward, cfg.env);
}

CompareResult run_compare(const ExperimentConfig& cfg, const OverlayGraph& g) {
  cfg.validate();
  SfcEnv env = make_env(cfg, g);
  RequestGenerator train_requests(g, cfg.qoe, cfg.requests,
                                  derive_seed(cfg.seed, SeedStream::kTrainRequests));
  std::mt19937_64 random_rng(derive_seed(cfg.seed, SeedStream::kRandomBaseline));
  const std::uint64_t cap = cfg.evaluation.enumeration_cap;

  CompareResult result;
  const auto observer = [&](const EpisodeMetrics& m, const std::vector<SfcRequest>& requests,
                            const std::vector<Rollout>&) {
    CompareRow row;
    row.episode = m.episode;
    row.dqn_qoe = m.mean_qoe;
    row.dqn_violation_rate = m.violation_rate;
    double random_sum = 0.0, violent_sum = 0.0;
    std::size_t random_complete = 0, random_violated = 0, violent_feasible = 0;
    for (const SfcRequest& req : requests) {
      const SearchReport r = random_chain(req, g, random_rng, cfg.qoe);
      if (r.complete) {
        random_sum += r.qoe;
        ++random_complete;
      }
      if (!r.feasible) ++random_violated;
      if (enumeration_size(req, g) > cap) {
        ++result.violent_skipped;
        continue;
      }
      const SearchReport v = violent_search(req, g, cfg.qoe, cap);
      if (v.feasible) {
        violent_sum += v.qoe;
        ++violent_feasible;
      }
    }
    row.random_qoe = mean_or_zero(random_sum, random_complete);
    row.random_violation_rate = mean_or_zero(static_cast<double>(random_violated), requests.size());
    if (violent_feasible) row.violent_qoe = violent_sum / static_cast<double>(violent_feasible);
    result.rows.push_back(row);
  };

  TrainResult trained = train(env, train_requests, cfg.train, cfg.policy, observer);
  result.metrics = std::move(trained.metrics);
  result.network = std::move(trained.network);

  RequestGenerator heldout_gen(g, cfg.qoe, cfg.requests, derive_seed(cfg.seed, SeedStream::kHeldOut));
  const std::vector<SfcRequest> heldout = heldout_gen.batch(cfg.evaluation.requests);

  MethodSummary random{"Random"}, violent{"Violent"}, dqn{"DQN"};
  {
    double qoe = 0.0, time = 0.0;
    std::size_t complete = 0, violated = 0;
    for (const SfcRequest& req : heldout) {
      const SearchReport r = random_chain(req, g, random_rng, cfg.qoe);
      time += r.wall_time_s;
      if (r.complete) {
        qoe += r.qoe;
        ++complete;
      }
      if (!r.feasible) ++violated;
    }
    random.timed_requests = heldout.size();
    random.mean_time_s = mean_or_zero(time, heldout.size());
    random.heldout_qoe = mean_or_zero(qoe, complete);
    random.heldout_violation_rate = mean_or_zero(static_cast<double>(violated), heldout.size());
  }
  {
    double qoe = 0.0, time = 0.0;
    std::size_t feasible = 0, searched = 0;
    for (const SfcRequest& req : heldout) {
      if (enumeration_size(req, g) > cap) continue;
      const SearchReport v = violent_search(req, g, cfg.qoe, cap);
      ++searched;
      time += v.wall_time_s;
      if (v.feasible) {
        qoe += v.qoe;
        ++feasible;
      }
    }
    violent.timed_requests = searched;
    violent.mean_time_s = mean_or_zero(time, searched);
    violent.heldout_qoe = mean_or_zero(qoe, feasible);
    violent.heldout_violation_rate = mean_or_zero(static_cast<double>(searched - feasible), searched);
  }
  {
    const auto records = evaluate(result.network, heldout, env);
    double qoe = 0.0, time = 0.0;
    std::size_t complete = 0, violated = 0;
    for (const auto& rec : records) {
      time += rec.wall_time_s;
      if (rec.complete) {
        qoe += rec.chain.qoe;
        ++complete;
      }
      if (rec.violated) ++violated;
    }
    dqn.timed_requests = records.size();
    dqn.mean_time_s = mean_or_zero(time, records.size());
    dqn.heldout_qoe = mean_or_zero(qoe, complete);
    dqn.heldout_violation_rate = mean_or_zero(static_cast<double>(violated), records.size());
  }
  result.summary = {random, violent, dqn};
  return result;
}

void write_compare_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<CompareRow>& rows) {
  write_header(out, "compare", cfg);
  out << "episode,dqn_qoe,random_qoe,violent_qoe,dqn_violation_rate,random_violation_rate\n";
  for (const auto& r : rows) {
    out << r.episode << ',' << fmt(r.dqn_qoe) << ',' << fmt(r.random_qoe) << ','
        << (r.violent_qoe ? fmt(*r.violent_qoe) : std::string()) << ',' << fmt(r.dqn_violation_rate)
        << ',' << fmt(r.random_violation_rate) << '\n';
  }
}

void write_metrics_csv(std::ostream& out, const ExperimentConfig& cfg,
                       const std::vector<EpisodeMetrics>& metrics) {
  write_header(out, "metrics", cfg);
  out << "episode,mean_qoe,violation_rate,mean_reward,loss\n";
  for (const auto& m : metrics) {
    out << m.episode << ',' << fmt(m.mean_qoe) << ',' << fmt(m.violation_rate) << ','
        << fmt(m.mean_reward) << ',' << fmt(m.loss) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& cfg,
                       const std::vector<MethodSummary>& summary) {
  write_header(out, "summary", cfg);
  out << "method,mean_time_s,timed_requests,heldout_qoe,heldout_violation_rate\n";
  for (const auto& s : summary) {
    out << s.method << ',' << fmt(s.mean_time_s) << ',' << s.timed_requests << ','
        << fmt(s.heldout_qoe) << ',' << fmt(s.heldout_violation_rate) << '\n';
  }
}

void write_evaluation_csv(std::ostream& out, const ExperimentConfig& cfg, const OverlayGraph& g,
                          const std::vector<SfcRequest>& requests,
                          const std::vector<EvaluationRecord>& records) {
  write_header(out, "evaluation", cfg);
  out << "request,functions,complete,violated,qoe,chain,time_s\n";
  for (std::size_t i = 0; i < records.size() && i < requests.size(); ++i) {
    std::string functions, chain;
    for (std::size_t t : requests[i].functions) {
      if (!functions.empty()) functions += '>';
      functions += g.types()[t].name;
    }
    for (const auto& sel : records[i].chain.selections) {
      if (!chain.empty()) chain += '>';
      chain += g.instances()[sel.instance].name;
    }
    out << i << ',' << functions << ',' << records[i].complete << ',' << records[i].violated << ','
        << fmt(records[i].chain.qoe) << ',' << chain << ',' << fmt(records[i].wall_time_s) << '\n';
  }
}

std::vector<lldp::CapturedFrame> read_frame_corpus(std::istream& in) {
  std::vector<lldp::CapturedFrame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    lldp::CapturedFrame f;
    std::string hex, extra;
    if (!(fields >> f.scheme)) continue;
    if (!(fields >> hex) || (fields >> extra)) {
      throw std::runtime_error("corpus line " + std::to_string(line_no) + ": expected '<scheme> <hex>'");
    }
    f.bytes = lldp::from_hex(hex);
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_frame_corpus(std::ostream& out, const std::vector<lldp::CapturedFrame>& frames) {
  for (const auto& f : frames) out << f.scheme << ' ' << lldp::to_hex(f.bytes) << '\n';
}

std::vector<lldp::CapturedFrame> generate_frame_corpus(const RawTopology& raw, std::uint64_t seed,
                                                       std::size_t data_frames_per_device) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<std::size_t> payload_len(46, 1500);

  struct Device {
    std::string name;
    QosMetrics qos;
  };
  std::vector<Device> devices;
  for (const auto& s : raw.switches) devices.push_back({s.name, s.qos});
  for (const auto& l : raw.links) {
    if (!l.name.empty()) devices.push_back({l.name, l.qos});
  }

  std::vector<lldp::CapturedFrame> out;
  for (const char* scheme : {"lldp", "qos"}) {
    const bool with_qos = std::string(scheme) == "qos";
    for (std::size_t d = 0; d < devices.size(); ++d) {
      lldp::LldpFrame f;
      f.chassis_id.assign(devices[d].name.begin(), devices[d].name.end());
      const std::string port = "port1";
      f.port_id.assign(port.begin(), port.end());
      f.trailing_tlvs.push_back(lldp::RawTlv{5, f.chassis_id});  // system name
      if (with_qos) {
        const QosMetrics& q = devices[d].qos;
        f.qos = lldp::QosTlv{q.dl, q.bw, q.pl, q.jt};
      }
      std::array<std::uint8_t, 6> mac{0x02, 0x00, static_cast<std::uint8_t>(d >> 24),
                                      static_cast<std::uint8_t>(d >> 16), static_cast<std::uint8_t>(d >> 8),
                                      static_cast<std::uint8_t>(d)};
      out.push_back({scheme, lldp::wrap_ethernet(lldp::build_lldp_frame(f), mac)});
      for (std::size_t k = 0; k < data_frames_per_device; ++k) {
        lldp::Bytes data(14 + payload_len(rng));
        for (auto& b : data) b = static_cast<std::uint8_t>(byte(rng));
        data[12] = 0x08;  // IPv4
        data[13] = 0x00;
        out.push_back({scheme, std::move(data)});
      }
    }
  }
  return out;
}

std::vector<FrameCheck> roundtrip_corpus(const std::vector<lldp::CapturedFrame>& frames,
                                         const std::string& qos_scheme) {
  std::vector<FrameCheck> out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!lldp::is_lldp_ethernet_frame(frames[i].bytes)) continue;
    FrameCheck c;
    c.index = i;
    try {
      const auto payload = lldp::ethernet_payload(frames[i].bytes);
      const lldp::LldpFrame parsed = lldp::parse_lldp_frame(payload);
      if (!parsed.qos && frames[i].scheme == qos_scheme) {
        c.message = "no QoS TLV with org code 0x00ABCD and subtype 1";
        out.push_back(std::move(c));
        continue;
      }
      const lldp::Bytes rebuilt = lldp::build_lldp_frame(parsed);
      const bool prefix = rebuilt.size() <= payload.size() &&
                          std::equal(rebuilt.begin(), rebuilt.end(), payload.begin());
      const bool zero_tail = prefix && std::all_of(payload.begin() + static_cast<std::ptrdiff_t>(rebuilt.size()),
                                                   payload.end(), [](std::uint8_t b) { return b == 0; });
      c.ok = zero_tail;
      c.message = c.ok ? "ok" : "rebuilt bytes differ";
    } catch (const lldp::CodecException& e) {
      c.message = e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

void dump_corpus(std::ostream& out, const std::vector<lldp::CapturedFrame>& frames) {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    out << "frame " << i << " scheme=" << f.scheme << " bytes=" << f.bytes.size();
    if (!lldp::is_lldp_ethernet_frame(f.bytes)) {
      out << " non-lldp\n";
      continue;
    }
    try {
      const auto parsed = lldp::parse_lldp_frame(lldp::ethernet_payload(f.bytes));
      out << " chassis=" << std::string(parsed.chassis_id.begin(), parsed.chassis_id.end())
          << " port=" << std::string(parsed.port_id.begin(), parsed.port_id.end())
          << " ttl=" << parsed.ttl_s;
      if (parsed.qos) {
        out << " dl=" << fmt(parsed.qos->delay_us) << " bw=" << fmt(parsed.qos->bandwidth_mbps)
            << " pl=" << fmt(parsed.qos->packet_loss) << " jt=" << fmt(parsed.qos->jitter_us);
      }
      out << " extra_tlvs=" << parsed.trailing_tlvs.size() << '\n';
    } catch (const lldp::CodecException& e) {
      out << " error: " << e.what() << '\n';
    }
    out << "  " << lldp::to_hex(f.bytes) << '\n';
  }
}

void write_overhead_report(std::ostream& out, const std::vector<lldp::OverheadRow>& rows) {
  out << "scheme,total_packets,lldp_packets,lldp_packet_share_pct,total_bytes,lldp_bytes,"
         "lldp_byte_share_pct,mean_lldp_frame_bytes\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.total_packets << ',' << r.lldp_packets << ','
        << fmt(r.lldp_packet_share()) << ',' << r.total_bytes << ',' << r.lldp_bytes << ','
        << fmt(r.lldp_byte_share()) << ',' << fmt(r.mean_lldp_frame_bytes()) << '\n';
  }
}

std::size_t refresh_topology(RawTopology& raw, const std::vector<lldp::CapturedFrame>& frames) {
  std::size_t applied = 0;
  for (const auto& f : frames) {
    if (!lldp::is_lldp_ethernet_frame(f.bytes)) continue;
    const auto parsed = lldp::parse_lldp_frame(lldp::ethernet_payload(f.bytes));
    if (raw.apply_qos_frame(parsed)) ++applied;
  }
  return applied;
}

}  // namespace q2sfc
