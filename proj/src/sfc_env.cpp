#include "q2sfc/sfc_env.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace q2sfc {

namespace {

double normalize(double value, double reference) {
  const double v = value / std::max(std::abs(reference), kNormFloor);
  return std::clamp(v, -kFeatureClip, kFeatureClip);
}

void append_normalized(std::vector<double>& out, const QosVector& qos, const QosVector& qcon) {
  for (std::size_t t = 0; t < kMetricCount; ++t) out.push_back(normalize(qos[t], qcon[t]));
}

}  // namespace

std::optional<std::size_t> EnvState::endpoint() const {
  if (chain.empty()) return std::nullopt;
  return chain.selections.back().instance;
}

SfcEnv::SfcEnv(OverlayGraph graph, QoeParams qoe, RewardParams reward, EnvConfig config)
    : base_graph_(graph),
      graph_(std::move(graph)),
      qoe_(std::move(qoe)),
      reward_(std::move(reward)),
      config_(config) {
  qoe_.validate();
  reward_.validate();
  if (qoe_.metric_count() != kMetricCount || qoe_.positive_count != kPositiveMetricCount) {
    throw EnvError("environment QoE parameters must cover the five chain metrics");
  }
  if (graph_.types().empty()) throw EnvError("topology has no VNF types");
  max_chain_length_ =
      config_.max_chain_length == 0 ? graph_.types().size() : config_.max_chain_length;
  action_width_ = graph_.max_instances_per_type();
  if (action_width_ == 0) throw EnvError("topology has no VNF instances");
}

std::size_t SfcEnv::state_width() const {
  return max_chain_length_ + kMetricCount + action_width_ * (kMetricCount + 2) + kMetricCount;
}

void SfcEnv::reset_graph() { graph_ = base_graph_; }

void SfcEnv::validate_request(const SfcRequest& request) const {
  if (request.functions.empty()) throw EnvError("request has no functions");
  if (request.functions.size() > max_chain_length_) {
    throw EnvError("request longer than the configured maximum chain length");
  }
  for (std::size_t t : request.functions) {
    if (t >= graph_.types().size() || graph_.types()[t].instance_count == 0) {
      throw EnvError("request references unknown VNF type " + std::to_string(t));
    }
  }
  for (double c : request.qcon) {
    if (!std::isfinite(c)) throw EnvError("request constraint is not finite");
  }
}

std::vector<std::size_t> SfcEnv::candidates(const EnvState& s) const {
  if (s.position >= s.request.length()) return {};
  return successors(graph_, s.endpoint(), s.request.functions[s.position]);
}

EpisodeOutcome SfcEnv::outcome_after(const EnvState& s) const {
  if (s.position == s.request.length()) return EpisodeOutcome::kSuccess;
  return candidates(s).empty() ? EpisodeOutcome::kDeadEnd : EpisodeOutcome::kRunning;
}

EnvState SfcEnv::reset(std::uint64_t seed, const SfcRequest& request) {
  validate_request(request);
  rng_.seed(seed);
  EnvState s;
  s.request = request;
  s.chain.qos = QosMetrics{}.to_vector();
  s.outcome = outcome_after(s);
  return s;
}

std::vector<std::size_t> SfcEnv::valid_actions(const EnvState& s) const {
  std::vector<std::size_t> out;
  if (s.terminal()) return out;
  for (std::size_t k : candidates(s)) out.push_back(graph_.instances()[k].slot);
  return out;
}

std::vector<std::uint8_t> SfcEnv::action_mask(const EnvState& s) const {
  std::vector<std::uint8_t> mask(action_width_, 0);
  for (std::size_t a : valid_actions(s)) mask[a] = 1;
  return mask;
}

StepResult SfcEnv::step(const EnvState& s, std::size_t action) {
  if (s.terminal()) throw EnvError("step called on a terminal state");
  const std::size_t type = s.request.functions[s.position];
  const auto legal = valid_actions(s);
  if (std::find(legal.begin(), legal.end(), action) == legal.end()) {
    throw EnvError("illegal action " + std::to_string(action) + " at position " +
                   std::to_string(s.position));
  }
  const std::size_t instance = graph_.instance_at(type, action);

  StepResult out{s, false};
  EnvState& next = out.state;
  const bool was_potential = graph_.instances()[instance].status == InstanceStatus::kPotential;
  const auto prev = s.endpoint();

  QosMetrics acc = QosMetrics::from_vector(s.chain.qos);
  if (prev) acc = compose(acc, graph_.hop_qos(*prev, instance));
  acc = compose(acc, graph_.instances()[instance].node_qos);

  if (was_potential) graph_.instantiate(instance);
  if (prev && config_.bandwidth_decrement_mbps > 0.0) {
    graph_.consume_bandwidth(*prev, instance, config_.bandwidth_decrement_mbps);
  }

  next.chain.selections.push_back(Selection{instance, type, was_potential});
  next.chain.qos = acc.to_vector();
  next.position += 1;
  next.outcome = outcome_after(next);
  out.terminal = next.terminal();
  return out;
}

RewardBreakdown SfcEnv::finalize_episode(std::vector<Transition>& trajectory,
                                         EnvState& final_state) const {
  const std::size_t n = final_state.request.length();
  RewardBreakdown breakdown;
  if (final_state.outcome == EpisodeOutcome::kSuccess) {
    breakdown = chain_reward(final_state.chain, final_state.request.qcon, qoe_, reward_);
    final_state.chain.qoe = breakdown.qoe;
  } else {
    breakdown.qos_penalty = reward_.penalty;
    breakdown.reward = -reward_.penalty;
    final_state.chain.qoe = 0.0;
  }
  final_state.chain.reward = breakdown.reward;
  const double per_instance = distribute_reward(breakdown.reward, n);
  for (auto& t : trajectory) t.reward = per_instance;
  return breakdown;
}

std::vector<double> SfcEnv::encode_state(const EnvState& s) const {
  std::vector<double> out;
  out.reserve(state_width());
  const QosVector& qcon = s.request.qcon;

  for (std::size_t i = 0; i < max_chain_length_; ++i) out.push_back(i == s.position ? 1.0 : 0.0);

  if (const auto end = s.endpoint()) {
    append_normalized(out, graph_.instances()[*end].node_qos.to_vector(), qcon);
  } else {
    out.insert(out.end(), kMetricCount, 0.0);
  }

  std::vector<std::size_t> by_slot(action_width_, SIZE_MAX);
  if (!s.terminal()) {
    for (std::size_t k : candidates(s)) by_slot[graph_.instances()[k].slot] = k;
  }
  const QosMetrics so_far = QosMetrics::from_vector(s.chain.qos);
  for (std::size_t slot = 0; slot < action_width_; ++slot) {
    const std::size_t k = by_slot[slot];
    if (k == SIZE_MAX) {
      out.insert(out.end(), kMetricCount + 2, 0.0);
      continue;
    }
    QosMetrics prospective = so_far;
    if (const auto end = s.endpoint()) prospective = compose(prospective, graph_.hop_qos(*end, k));
    prospective = compose(prospective, graph_.instances()[k].node_qos);
    append_normalized(out, prospective.to_vector(), qcon);
    out.push_back(1.0);
    out.push_back(graph_.instances()[k].status == InstanceStatus::kPotential ? 1.0 : 0.0);
  }

  // Slack of the partial chain, oriented so positive means satisfied.
  for (std::size_t t = 0; t < kMetricCount; ++t) {
    const double diff = t < kPositiveMetricCount ? s.chain.qos[t] - qcon[t] : qcon[t] - s.chain.qos[t];
    out.push_back(normalize(diff, qcon[t]));
  }
  return out;
}

// Request files: one line per request,
//   request <type>,<type>,... bw=<> av=<> dl=<> pl=<> jt=<>
// where <type> is a type name from the topology or its index.
std::vector<SfcRequest> read_requests(std::istream& in, const OverlayGraph& g) {
  std::vector<SfcRequest> out;
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& msg) {
    throw EnvError("request line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string kind, types;
    if (!(tokens >> kind)) continue;
    if (kind != "request") fail("unknown record '" + kind + "'");
    if (!(tokens >> types)) fail("missing function list");
    SfcRequest req;
    std::istringstream list(types);
    for (std::string name; std::getline(list, name, ',');) {
      if (auto t = g.find_type(name)) {
        req.functions.push_back(*t);
        continue;
      }
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
      if (ec != std::errc() || ptr != name.data() + name.size() || idx >= g.types().size()) {
        fail("unknown VNF type '" + name + "'");
      }
      req.functions.push_back(idx);
    }
    std::array<bool, kMetricCount> seen{};
    for (std::string tok; tokens >> tok;) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) fail("expected key=value, got '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      std::size_t t = kMetricCount;
      for (std::size_t m = 0; m < kMetricCount; ++m) {
        if (metric_name(static_cast<Metric>(m)) == key) t = m;
      }
      if (t == kMetricCount) fail("unknown constraint '" + key + "'");
      const std::string value = tok.substr(eq + 1);
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), req.qcon[t]);
      if (ec != std::errc() || ptr != value.data() + value.size()) fail("bad number '" + value + "'");
      seen[t] = true;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
      fail("all five constraints (bw av dl pl jt) are required");
    }
    out.push_back(std::move(req));
  }
  return out;
}

std::vector<SfcRequest> load_requests(const std::string& path, const OverlayGraph& g) {
  std::ifstream in(path);
  if (!in) throw EnvError("cannot open request file '" + path + "'");
  return read_requests(in, g);
}

void write_requests(std::ostream& out, const std::vector<SfcRequest>& requests,
                    const OverlayGraph& g) {
  char buf[64];
  for (const auto& r : requests) {
    out << "request ";
    for (std::size_t i = 0; i < r.functions.size(); ++i) {
      out << (i ? "," : "") << g.types().at(r.functions[i]).name;
    }
    for (std::size_t t = 0; t < kMetricCount; ++t) {
      std::snprintf(buf, sizeof(buf), "%.17g", r.qcon[t]);
      out << " " << metric_name(static_cast<Metric>(t)) << "=" << buf;
    }
    out << "\n";
  }
}

}  // namespace q2sfc
