#include "q2sfc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <unordered_map>

namespace q2sfc {

QosMetrics aggregate_link(std::span<const QosMetrics> devices) {
  if (devices.empty()) throw TopologyError("aggregate_link: empty device list");
  QosMetrics out;
  double log_survival = 0.0;
  for (const auto& d : devices) {
    validate(d);
    out.dl += d.dl;
    out.bw = std::min(out.bw, d.bw);
    log_survival += std::log1p(-d.pl);
    out.av *= d.av;
    out.jt += d.jt;
  }
  out.pl = -std::expm1(log_survival);
  return out;
}

std::string_view to_string(InstanceStatus status) {
  return status == InstanceStatus::kDeployed ? "deployed" : "potential";
}

AggregatedLink::AggregatedLink(std::size_t server_a, std::size_t server_b,
                               std::vector<QosMetrics> devices)
    : server_a_(server_a), server_b_(server_b), devices_(std::move(devices)) {
  recompute();
}

void AggregatedLink::recompute() {
  agg_qos_ = devices_.empty() ? QosMetrics{} : aggregate_link(devices_);
}

void AggregatedLink::consume_bandwidth(double mbps) {
  if (mbps <= 0.0) return;
  for (auto& d : devices_) {
    if (std::isfinite(d.bw)) d.bw = std::max(0.0, d.bw - mbps);
  }
  recompute();
}

OverlayGraph::OverlayGraph(std::vector<std::string> type_names, std::vector<Server> servers,
                           std::vector<InstanceSpec> instances,
                           std::vector<AggregatedLink> links)
    : servers_(std::move(servers)), links_(std::move(links)) {
  types_.reserve(type_names.size());
  for (auto& name : type_names) types_.push_back(VnfType{std::move(name), 0});
  slots_.resize(types_.size());

  for (auto& spec : instances) {
    if (spec.type >= types_.size()) {
      throw TopologyError("instance '" + spec.name + "' references unknown type");
    }
    if (spec.server >= servers_.size()) {
      throw TopologyError("instance '" + spec.name + "' references unknown server");
    }
    validate(spec.node_qos);
    if (spec.status == InstanceStatus::kPotential && servers_[spec.server].spare_slots == 0) {
      throw TopologyError("potential instance '" + spec.name +
                          "' sits on a server without spare capacity");
    }
    VnfInstance inst;
    inst.name = std::move(spec.name);
    inst.type = spec.type;
    inst.slot = slots_[spec.type].size();
    inst.server = spec.server;
    inst.status = spec.status;
    inst.node_qos = spec.node_qos;
    slots_[spec.type].push_back(instances_.size());
    types_[spec.type].instance_count += 1;
    instances_.push_back(std::move(inst));
  }

  link_matrix_.assign(servers_.size() * servers_.size(), -1);
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto a = links_[i].server_a();
    const auto b = links_[i].server_b();
    if (a >= servers_.size() || b >= servers_.size() || a == b) {
      throw TopologyError("aggregated link endpoints are invalid");
    }
    if (link_matrix_[link_slot(a, b)] >= 0) {
      throw TopologyError("duplicate aggregated link between '" + servers_[a].name + "' and '" +
                          servers_[b].name + "'");
    }
    link_matrix_[link_slot(a, b)] = static_cast<int>(i);
    link_matrix_[link_slot(b, a)] = static_cast<int>(i);
  }
}

std::optional<std::size_t> OverlayGraph::find_type(std::string_view name) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> OverlayGraph::find_instance(std::string_view name) const {
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    if (instances_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t OverlayGraph::instance_at(std::size_t type, std::size_t slot) const {
  return slots_.at(type).at(slot);
}

std::size_t OverlayGraph::max_instances_per_type() const {
  std::size_t m = 0;
  for (const auto& t : types_) m = std::max(m, t.instance_count);
  return m;
}

const AggregatedLink* OverlayGraph::link_between(std::size_t server_a, std::size_t server_b) const {
  if (server_a == server_b) return nullptr;
  const int idx = link_matrix_.at(link_slot(server_a, server_b));
  return idx < 0 ? nullptr : &links_[static_cast<std::size_t>(idx)];
}

bool OverlayGraph::servers_connected(std::size_t server_a, std::size_t server_b) const {
  return server_a == server_b || link_between(server_a, server_b) != nullptr;
}

bool OverlayGraph::connected(std::size_t from_instance, std::size_t to_instance) const {
  return servers_connected(instances_.at(from_instance).server, instances_.at(to_instance).server);
}

QosMetrics OverlayGraph::hop_qos(std::size_t from_instance, std::size_t to_instance) const {
  const auto a = instances_.at(from_instance).server;
  const auto b = instances_.at(to_instance).server;
  if (a == b) return QosMetrics{};
  const AggregatedLink* link = link_between(a, b);
  if (!link) {
    throw TopologyError("no aggregated link between '" + instances_[from_instance].name +
                        "' and '" + instances_[to_instance].name + "'");
  }
  return link->qos();
}

std::vector<std::size_t> OverlayGraph::reachable(std::size_t instance) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < instances_.size(); ++k) {
    if (k != instance && connected(instance, k)) out.push_back(k);
  }
  return out;
}

void OverlayGraph::instantiate(std::size_t instance) {
  auto& inst = instances_.at(instance);
  if (inst.status != InstanceStatus::kPotential) {
    throw TopologyError("instance '" + inst.name + "' is already deployed");
  }
  auto& server = servers_[inst.server];
  if (server.spare_slots == 0) {
    throw TopologyError("server '" + server.name + "' has no spare capacity left");
  }
  server.spare_slots -= 1;
  inst.status = InstanceStatus::kDeployed;
}

void OverlayGraph::consume_bandwidth(std::size_t from_instance, std::size_t to_instance,
                                     double mbps) {
  const auto a = instances_.at(from_instance).server;
  const auto b = instances_.at(to_instance).server;
  if (a == b) return;
  const int idx = link_matrix_.at(link_slot(a, b));
  if (idx >= 0) links_[static_cast<std::size_t>(idx)].consume_bandwidth(mbps);
}

std::vector<std::size_t> successors(const OverlayGraph& g, std::optional<std::size_t> current,
                                    std::size_t next_type,
                                    std::span<const std::size_t> spare_slots) {
  std::vector<std::size_t> out;
  if (next_type >= g.types().size()) return out;
  std::vector<bool> potential_offered(g.servers().size(), false);
  for (std::size_t slot = 0; slot < g.types()[next_type].instance_count; ++slot) {
    const std::size_t k = g.instance_at(next_type, slot);
    const auto& inst = g.instances()[k];
    if (current && !g.connected(*current, k)) continue;
    if (inst.status == InstanceStatus::kPotential) {
      const std::size_t spare =
          spare_slots.empty() ? g.servers()[inst.server].spare_slots : spare_slots[inst.server];
      if (potential_offered[inst.server] || spare == 0) continue;
      potential_offered[inst.server] = true;
    }
    out.push_back(k);
  }
  return out;
}

bool RawTopology::apply_qos_frame(const lldp::LldpFrame& frame) {
  if (!frame.qos) return false;
  const std::string device(frame.chassis_id.begin(), frame.chassis_id.end());
  const auto refresh = [&](QosMetrics& q) {
    q.dl = frame.qos->delay_us;
    q.bw = frame.qos->bandwidth_mbps;
    q.pl = frame.qos->packet_loss;
    q.jt = frame.qos->jitter_us;
  };
  for (auto& sw : switches) {
    if (sw.name == device) {
      refresh(sw.qos);
      return true;
    }
  }
  for (auto& link : links) {
    if (!link.name.empty() && link.name == device) {
      refresh(link.qos);
      return true;
    }
  }
  return false;
}

namespace {

struct Edge {
  std::size_t to;
  std::size_t link;  // index into raw.links
};

}  // namespace

OverlayGraph simplify(const RawTopology& raw) {
  // Nodes: servers first, then switches.
  const std::size_t n_servers = raw.servers.size();
  const std::size_t n_nodes = n_servers + raw.switches.size();
  std::unordered_map<std::string, std::size_t> node_of;
  for (std::size_t i = 0; i < n_servers; ++i) {
    if (!node_of.emplace(raw.servers[i].name, i).second) {
      throw TopologyError("duplicate node name '" + raw.servers[i].name + "'");
    }
  }
  for (std::size_t i = 0; i < raw.switches.size(); ++i) {
    validate(raw.switches[i].qos);
    if (!node_of.emplace(raw.switches[i].name, n_servers + i).second) {
      throw TopologyError("duplicate node name '" + raw.switches[i].name + "'");
    }
  }
  std::vector<std::vector<Edge>> adj(n_nodes);
  for (std::size_t l = 0; l < raw.links.size(); ++l) {
    const auto& link = raw.links[l];
    validate(link.qos);
    const auto a = node_of.find(link.endpoint_a);
    const auto b = node_of.find(link.endpoint_b);
    if (a == node_of.end() || b == node_of.end()) {
      throw TopologyError("link references unknown node '" +
                          (a == node_of.end() ? link.endpoint_a : link.endpoint_b) + "'");
    }
    adj[a->second].push_back(Edge{b->second, l});
    adj[b->second].push_back(Edge{a->second, l});
  }
  const auto is_switch = [&](std::size_t node) { return node >= n_servers; };
  const auto switch_qos = [&](std::size_t node) -> const QosMetrics& {
    return raw.switches[node - n_servers].qos;
  };

  std::vector<AggregatedLink> links;
  for (std::size_t src = 0; src < n_servers; ++src) {
    // Widest bottleneck from src to every node, forwarding only via switches.
    std::vector<double> widest(n_nodes, -1.0);
    using WideEntry = std::pair<double, std::size_t>;
    std::priority_queue<WideEntry> wide_queue;
    widest[src] = kUnboundedBandwidth;
    wide_queue.push({widest[src], src});
    while (!wide_queue.empty()) {
      const auto [width, u] = wide_queue.top();
      wide_queue.pop();
      if (width < widest[u]) continue;
      if (u != src && !is_switch(u)) continue;
      for (const Edge& e : adj[u]) {
        double w = std::min(width, raw.links[e.link].qos.bw);
        if (is_switch(e.to)) w = std::min(w, switch_qos(e.to).bw);
        if (w > widest[e.to]) {
          widest[e.to] = w;
          wide_queue.push({w, e.to});
        }
      }
    }

    for (std::size_t dst = src + 1; dst < n_servers; ++dst) {
      const double bottleneck = widest[dst];
      if (bottleneck < 0.0) continue;
      // Lowest-delay path among those keeping the widest bottleneck.
      std::vector<double> delay(n_nodes, std::numeric_limits<double>::infinity());
      std::vector<std::size_t> via_link(n_nodes, SIZE_MAX);
      std::vector<std::size_t> via_node(n_nodes, SIZE_MAX);
      using DelayEntry = std::pair<double, std::size_t>;
      std::priority_queue<DelayEntry, std::vector<DelayEntry>, std::greater<>> queue;
      delay[src] = 0.0;
      queue.push({0.0, src});
      while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > delay[u]) continue;
        if (u == dst) break;
        if (u != src && !is_switch(u)) continue;
        for (const Edge& e : adj[u]) {
          const auto& lq = raw.links[e.link].qos;
          if (lq.bw < bottleneck) continue;
          double nd = d + lq.dl;
          if (is_switch(e.to)) {
            if (switch_qos(e.to).bw < bottleneck) continue;
            nd += switch_qos(e.to).dl;
          }
          if (nd < delay[e.to]) {
            delay[e.to] = nd;
            via_link[e.to] = e.link;
            via_node[e.to] = u;
            queue.push({nd, e.to});
          }
        }
      }
      if (via_link[dst] == SIZE_MAX) continue;
      std::vector<QosMetrics> devices;
      for (std::size_t v = dst; v != src; v = via_node[v]) {
        if (is_switch(v)) devices.push_back(switch_qos(v));
        devices.push_back(raw.links[via_link[v]].qos);
      }
      std::reverse(devices.begin(), devices.end());
      links.emplace_back(src, dst, std::move(devices));
    }
  }

  std::vector<OverlayGraph::InstanceSpec> specs;
  specs.reserve(raw.instances.size());
  for (const auto& inst : raw.instances) {
    const auto t = std::find(raw.types.begin(), raw.types.end(), inst.type);
    if (t == raw.types.end()) {
      throw TopologyError("instance '" + inst.name + "' has unknown type '" + inst.type + "'");
    }
    const auto s = node_of.find(inst.server);
    if (s == node_of.end() || is_switch(s->second)) {
      throw TopologyError("instance '" + inst.name + "' has unknown server '" + inst.server + "'");
    }
    specs.push_back(OverlayGraph::InstanceSpec{inst.name,
                                               static_cast<std::size_t>(t - raw.types.begin()),
                                               s->second, inst.status, inst.node_qos});
  }
  return OverlayGraph(raw.types, raw.servers, std::move(specs), std::move(links));
}

}  // namespace q2sfc
