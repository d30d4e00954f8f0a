#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "q2sfc/lldp_codec.hpp"
#include "q2sfc/qos.hpp"

namespace q2sfc {

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Folds a forwarding path into one aggregated QoS value. Throws on an empty
// device list.
QosMetrics aggregate_link(std::span<const QosMetrics> devices);

enum class InstanceStatus { kDeployed, kPotential };

std::string_view to_string(InstanceStatus status);

struct VnfType {
  std::string name;
  std::size_t instance_count = 0;  // M_i, deployed and potential together
};

struct Server {
  std::string name;
  std::size_t spare_slots = 0;  // room for instantiating potential instances
};

// ins_ij: the `slot`-th instance of type `type`.
struct VnfInstance {
  std::string name;
  std::size_t type = 0;
  std::size_t slot = 0;
  std::size_t server = 0;
  InstanceStatus status = InstanceStatus::kDeployed;
  QosMetrics node_qos;
};

// Forwarding path between two servers collapsed into one edge. The aggregate
// is recomputed whenever the device chain changes.
class AggregatedLink {
 public:
  AggregatedLink(std::size_t server_a, std::size_t server_b, std::vector<QosMetrics> devices);

  std::size_t server_a() const { return server_a_; }
  std::size_t server_b() const { return server_b_; }
  const std::vector<QosMetrics>& device_chain() const { return devices_; }
  const QosMetrics& qos() const { return agg_qos_; }

  // Lowers every device's available bandwidth by `mbps`, floored at zero.
  void consume_bandwidth(double mbps);

 private:
  void recompute();

  std::size_t server_a_;
  std::size_t server_b_;
  std::vector<QosMetrics> devices_;
  QosMetrics agg_qos_;
};

// Simplified topology: VNF instances as nodes, aggregated links as edges.
// Instances hosted on the same server are mutually reachable over an
// identity link.
class OverlayGraph {
 public:
  struct InstanceSpec {
    std::string name;
    std::size_t type = 0;
    std::size_t server = 0;
    InstanceStatus status = InstanceStatus::kDeployed;
    QosMetrics node_qos;
  };

  OverlayGraph() = default;
  // Slots are assigned per type in the order instances are given.
  OverlayGraph(std::vector<std::string> type_names, std::vector<Server> servers,
               std::vector<InstanceSpec> instances, std::vector<AggregatedLink> links);

  const std::vector<VnfType>& types() const { return types_; }
  const std::vector<Server>& servers() const { return servers_; }
  const std::vector<VnfInstance>& instances() const { return instances_; }
  const std::vector<AggregatedLink>& links() const { return links_; }

  std::optional<std::size_t> find_type(std::string_view name) const;
  std::optional<std::size_t> find_instance(std::string_view name) const;
  std::size_t instance_at(std::size_t type, std::size_t slot) const;
  std::size_t max_instances_per_type() const;

  // nullptr when the servers are the same or not joined by a forwarding path.
  const AggregatedLink* link_between(std::size_t server_a, std::size_t server_b) const;
  bool servers_connected(std::size_t server_a, std::size_t server_b) const;
  bool connected(std::size_t from_instance, std::size_t to_instance) const;
  // QoS of the hop between two instances; identity on a shared server.
  QosMetrics hop_qos(std::size_t from_instance, std::size_t to_instance) const;
  std::vector<std::size_t> reachable(std::size_t instance) const;

  // Turns a potential instance into a deployed one, taking a spare slot on
  // its server. Link QoS is untouched.
  void instantiate(std::size_t instance);
  void consume_bandwidth(std::size_t from_instance, std::size_t to_instance, double mbps);

 private:
  std::size_t link_slot(std::size_t a, std::size_t b) const { return a * servers_.size() + b; }

  std::vector<VnfType> types_;
  std::vector<Server> servers_;
  std::vector<VnfInstance> instances_;
  std::vector<AggregatedLink> links_;
  std::vector<std::vector<std::size_t>> slots_;  // [type][slot] -> instance
  std::vector<int> link_matrix_;                 // servers x servers -> link index or -1
};

// Instances of `next_type` a chain may extend to from `current` (nullopt is
// the chain source, which reaches every server). Deployed instances come
// first-class; potential ones are offered at most once per server, and only
// while that server still has a spare slot. Sorted by slot. `spare_slots`,
// when non-empty, overrides the per-server capacity recorded in `g`.
std::vector<std::size_t> successors(const OverlayGraph& g, std::optional<std::size_t> current,
                                    std::size_t next_type,
                                    std::span<const std::size_t> spare_slots = {});

// Forwarding-plane view as declared in a topology file.
struct RawSwitch {
  std::string name;
  QosMetrics qos;
};

struct RawLink {
  std::string name;
  std::string endpoint_a;
  std::string endpoint_b;
  QosMetrics qos;
};

struct RawInstance {
  std::string name;
  std::string type;
  std::string server;
  InstanceStatus status = InstanceStatus::kDeployed;
  QosMetrics node_qos;
};

struct RawTopology {
  std::vector<std::string> types;
  std::vector<Server> servers;
  std::vector<RawSwitch> switches;
  std::vector<RawLink> links;
  std::vector<RawInstance> instances;

  // Refreshes dl/bw/pl/jt of the switch or link named by the frame's chassis
  // id. Availability is kept. Returns false when no device matches.
  bool apply_qos_frame(const lldp::LldpFrame& frame);
};

// Collapses switch/link paths between every server pair into aggregated
// links. Servers never forward. Among several paths the one with the widest
// bottleneck wins, then the lowest delay.
OverlayGraph simplify(const RawTopology& raw);

RawTopology read_topology(std::istream& in);
RawTopology load_topology(const std::string& path);
void write_topology(std::ostream& out, const RawTopology& raw);

}  // namespace q2sfc
