#include "q2sfc/config.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <type_traits>

#include "json.hpp"

namespace q2sfc {

using nlohmann::json;

namespace {

// Reads keys out of one JSON object and complains about whatever is left.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    const json& v = j_.at(key);
    check_kind<T>(v, key);
    try {
      out = v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where(key) + ": " + e.what());
    }
  }

  void range(const std::string& key, Range& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(where(key) + " must be [lo, hi]");
    }
    out = {v[0].get<double>(), v[1].get<double>()};
    if (!(out[0] <= out[1])) throw ConfigError(where(key) + ": lo exceeds hi");
  }

  std::optional<Section> sub(const std::string& key) {
    if (!j_.contains(key)) return std::nullopt;
    seen_.insert(key);
    return Section(j_.at(key), where(key));
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key " + where(item.key()));
    }
  }

 private:
  std::string where(const std::string& key = {}) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  template <class T>
  void check_kind(const json& v, const std::string& key) const {
    bool ok = true;
    if constexpr (std::is_same_v<T, bool>) {
      ok = v.is_boolean();
    } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
      ok = v.is_number_unsigned();
    } else if constexpr (std::is_floating_point_v<T>) {
      ok = v.is_number();
    } else if constexpr (std::is_same_v<T, std::string>) {
      ok = v.is_string();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
    } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
      ok = v.is_array() &&
           std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_unsigned(); });
    }
    if (!ok) throw ConfigError(where(key) + " has the wrong type");
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_qos_ranges(Section& s, QosRanges& r) {
  s.range("dl", r.dl);
  s.range("bw", r.bw);
  s.range("pl", r.pl);
  s.range("av", r.av);
  s.range("jt", r.jt);
  s.finish();
}

json qos_ranges_json(const QosRanges& r) {
  return json{{"dl", r.dl}, {"bw", r.bw}, {"pl", r.pl}, {"av", r.av}, {"jt", r.jt}};
}

}  // namespace

void TopologyGenConfig::validate() const {
  if (types == 0 || instances_per_type == 0) {
    throw ConfigError("topology needs at least one type and one instance per type");
  }
  if (!(density >= 0.0 && density <= 1.0)) throw ConfigError("topology.density must lie in [0, 1]");
  if (!(potential_fraction >= 0.0 && potential_fraction <= 1.0)) {
    throw ConfigError("topology.potential_fraction must lie in [0, 1]");
  }
  if (max_switches_per_path == 0) throw ConfigError("topology.max_switches_per_path must be positive");
  for (const QosRanges* r : {&node_qos, &device_qos}) {
    if (r->dl[0] < 0.0 || r->jt[0] < 0.0 || r->bw[0] < 0.0) {
      throw ConfigError("delay, jitter and bandwidth ranges must be non-negative");
    }
    if (r->pl[0] < 0.0 || r->pl[1] > 1.0 || r->av[0] < 0.0 || r->av[1] > 1.0) {
      throw ConfigError("probability ranges must lie in [0, 1]");
    }
  }
}

void ExperimentConfig::validate() const {
  if (topology_file.empty()) topology.validate();
  try {
    qoe.validate();
    reward.validate();
    train.validate();
    policy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (qoe.metric_count() != kMetricCount || qoe.positive_count != kPositiveMetricCount) {
    throw ConfigError("qoe weights must cover the five QoS metrics");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  Section s(root, "");
  if (!s.has("seed")) throw ConfigError("config must set seed");
  s.get("seed", cfg.seed);
  s.get("output_dir", cfg.output_dir);

  if (auto t = s.sub("topology")) {
    auto& g = cfg.topology;
    t->get("file", cfg.topology_file);
    t->get("types", g.types);
    t->get("instances_per_type", g.instances_per_type);
    t->get("density", g.density);
    t->get("potential_fraction", g.potential_fraction);
    t->get("max_switches_per_path", g.max_switches_per_path);
    if (auto n = t->sub("node_qos")) read_qos_ranges(*n, g.node_qos);
    if (auto d = t->sub("device_qos")) read_qos_ranges(*d, g.device_qos);
    t->finish();
  }
  if (auto q = s.sub("qoe")) {
    auto& p = cfg.qoe;
    q->get("alpha_p", p.alpha_p);
    q->get("beta_p", p.beta_p);
    q->get("gamma_p", p.gamma_p);
    q->get("theta_p", p.theta_p);
    q->get("alpha_n", p.alpha_n);
    q->get("beta_n", p.beta_n);
    q->get("gamma_n", p.gamma_n);
    q->get("theta_n", p.theta_n);
    q->get("weights", p.weights);
    q->get("scales", p.scales);
    q->finish();
  }
  if (auto r = s.sub("reward")) {
    r->get("penalty", cfg.reward.penalty);
    r->get("opex_normal", cfg.reward.opex_normal);
    r->get("opex_vm", cfg.reward.opex_vm);
    r->get("opex_vnf", cfg.reward.opex_vnf);
    r->finish();
  }
  if (auto e = s.sub("env")) {
    e->get("max_chain_length", cfg.env.max_chain_length);
    e->get("bandwidth_decrement_mbps", cfg.env.bandwidth_decrement_mbps);
    e->finish();
  }
  if (auto t = s.sub("train")) {
    auto& c = cfg.train;
    t->get("gamma", c.gamma);
    t->get("learning_rate", c.learning_rate);
    t->get("minibatch_size", c.minibatch_size);
    t->get("episodes", c.episodes);
    t->get("requests_per_episode", c.requests_per_episode);
    t->get("sync_period", c.sync_period);
    t->get("replay_capacity", c.replay_capacity);
    t->get("hidden_layers", c.hidden_layers);
    t->finish();
  }
  if (auto p = s.sub("policy")) {
    std::string kind = to_string(cfg.policy.kind);
    p->get("kind", kind);
    try {
      cfg.policy.kind = policy_kind_from_string(kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    p->get("epsilon", cfg.policy.epsilon);
    p->get("epsilon_final", cfg.policy.epsilon_final);
    p->get("epsilon_decay_episodes", cfg.policy.epsilon_decay_episodes);
    p->get("temperature", cfg.policy.temperature);
    p->finish();
  }
  if (auto r = s.sub("requests")) {
    auto& c = cfg.requests;
    r->get("min_length", c.min_length);
    r->get("max_length", c.max_length);
    r->get("slack_min", c.slack_min);
    r->get("slack_max", c.slack_max);
    r->get("verify_cap", c.verify_cap);
    r->get("max_attempts", c.max_attempts);
    r->finish();
  }
  if (auto e = s.sub("evaluation")) {
    e->get("requests", cfg.evaluation.requests);
    e->get("enumeration_cap", cfg.evaluation.enumeration_cap);
    e->finish();
  }
  s.finish();
  cfg.train.seed = derive_seed(cfg.seed, SeedStream::kTraining);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  const auto& g = cfg.topology;
  const auto& q = cfg.qoe;
  const auto& t = cfg.train;
  const auto& p = cfg.policy;
  const auto& r = cfg.requests;
  json j = {
      {"seed", cfg.seed},
      {"output_dir", cfg.output_dir},
      {"topology",
       {{"file", cfg.topology_file},
        {"types", g.types},
        {"instances_per_type", g.instances_per_type},
        {"density", g.density},
        {"potential_fraction", g.potential_fraction},
        {"max_switches_per_path", g.max_switches_per_path},
        {"node_qos", qos_ranges_json(g.node_qos)},
        {"device_qos", qos_ranges_json(g.device_qos)}}},
      {"qoe",
       {{"alpha_p", q.alpha_p},
        {"beta_p", q.beta_p},
        {"gamma_p", q.gamma_p},
        {"theta_p", q.theta_p},
        {"alpha_n", q.alpha_n},
        {"beta_n", q.beta_n},
        {"gamma_n", q.gamma_n},
        {"theta_n", q.theta_n},
        {"weights", q.weights},
        {"scales", q.scales}}},
      {"reward",
       {{"penalty", cfg.reward.penalty},
        {"opex_normal", cfg.reward.opex_normal},
        {"opex_vm", cfg.reward.opex_vm},
        {"opex_vnf", cfg.reward.opex_vnf}}},
      {"env",
       {{"max_chain_length", cfg.env.max_chain_length},
        {"bandwidth_decrement_mbps", cfg.env.bandwidth_decrement_mbps}}},
      {"train",
       {{"gamma", t.gamma},
        {"learning_rate", t.learning_rate},
        {"minibatch_size", t.minibatch_size},
        {"episodes", t.episodes},
        {"requests_per_episode", t.requests_per_episode},
        {"sync_period", t.sync_period},
        {"replay_capacity", t.replay_capacity},
        {"hidden_layers", t.hidden_layers}}},
      {"policy",
       {{"kind", to_string(p.kind)},
        {"epsilon", p.epsilon},
        {"epsilon_final", p.epsilon_final},
        {"epsilon_decay_episodes", p.epsilon_decay_episodes},
        {"temperature", p.temperature}}},
      {"requests",
       {{"min_length", r.min_length},
        {"max_length", r.max_length},
        {"slack_min", r.slack_min},
        {"slack_max", r.slack_max},
        {"verify_cap", r.verify_cap},
        {"max_attempts", r.max_attempts}}},
      {"evaluation",
       {{"requests", cfg.evaluation.requests}, {"enumeration_cap", cfg.evaluation.enumeration_cap}}},
  };
  return j.dump();
}

std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(stream);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace q2sfc
