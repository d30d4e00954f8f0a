#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "q2sfc/topology.hpp"

// Line-oriented topology description:
//
//   type <name>
//   server <name> [spare=<n>]
//   switch <name> [dl=] [bw=] [pl=] [av=] [jt=]
//   link <a> <b> [name=<device>] [dl=] [bw=] [pl=] [av=] [jt=]
//   instance <name> type=<t> server=<s> [status=deployed|potential] [dl=] ...
//
// Omitted QoS keys default to the aggregation identity. '#' starts a comment.

namespace q2sfc {

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& msg) {
  throw TopologyError("topology line " + std::to_string(line_no) + ": " + msg);
}

double parse_double(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) parse_error(line_no, "bad number '" + std::string(text) + "'");
  return value;
}

bool apply_qos_key(QosMetrics& q, std::string_view key, std::string_view value,
                   std::size_t line_no) {
  double* field = nullptr;
  if (key == "dl") field = &q.dl;
  else if (key == "bw") field = &q.bw;
  else if (key == "pl") field = &q.pl;
  else if (key == "av") field = &q.av;
  else if (key == "jt") field = &q.jt;
  if (!field) return false;
  *field = parse_double(value, line_no);
  return true;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_qos(std::ostream& out, const QosMetrics& q) {
  out << " dl=" << format_double(q.dl) << " bw=" << format_double(q.bw)
      << " pl=" << format_double(q.pl) << " av=" << format_double(q.av)
      << " jt=" << format_double(q.jt);
}

}  // namespace

RawTopology read_topology(std::istream& in) {
  RawTopology raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string kind;
    if (!(tokens >> kind)) continue;

    std::vector<std::string> positional;
    std::vector<std::pair<std::string, std::string>> keyed;
    for (std::string tok; tokens >> tok;) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) {
        if (!keyed.empty()) parse_error(line_no, "positional token after key=value");
        positional.push_back(tok);
      } else {
        keyed.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
      }
    }
    const auto expect_positional = [&](std::size_t n) {
      if (positional.size() != n) {
        parse_error(line_no, "'" + kind + "' expects " + std::to_string(n) + " name(s)");
      }
    };

    if (kind == "type") {
      expect_positional(1);
      if (!keyed.empty()) parse_error(line_no, "'type' takes no keys");
      raw.types.push_back(positional[0]);
    } else if (kind == "server") {
      expect_positional(1);
      Server s{positional[0], 0};
      for (const auto& [k, v] : keyed) {
        if (k != "spare") parse_error(line_no, "unknown server key '" + k + "'");
        s.spare_slots = static_cast<std::size_t>(parse_double(v, line_no));
      }
      raw.servers.push_back(std::move(s));
    } else if (kind == "switch") {
      expect_positional(1);
      RawSwitch sw{positional[0], {}};
      for (const auto& [k, v] : keyed) {
        if (!apply_qos_key(sw.qos, k, v, line_no)) parse_error(line_no, "unknown switch key '" + k + "'");
      }
      raw.switches.push_back(std::move(sw));
    } else if (kind == "link") {
      expect_positional(2);
      RawLink link{"", positional[0], positional[1], {}};
      for (const auto& [k, v] : keyed) {
        if (k == "name") link.name = v;
        else if (!apply_qos_key(link.qos, k, v, line_no)) parse_error(line_no, "unknown link key '" + k + "'");
      }
      raw.links.push_back(std::move(link));
    } else if (kind == "instance") {
      expect_positional(1);
      RawInstance inst;
      inst.name = positional[0];
      for (const auto& [k, v] : keyed) {
        if (k == "type") inst.type = v;
        else if (k == "server") inst.server = v;
        else if (k == "status") {
          if (v == "deployed") inst.status = InstanceStatus::kDeployed;
          else if (v == "potential") inst.status = InstanceStatus::kPotential;
          else parse_error(line_no, "status must be deployed or potential");
        } else if (!apply_qos_key(inst.node_qos, k, v, line_no)) {
          parse_error(line_no, "unknown instance key '" + k + "'");
        }
      }
      if (inst.type.empty() || inst.server.empty()) parse_error(line_no, "instance needs type= and server=");
      raw.instances.push_back(std::move(inst));
    } else {
      parse_error(line_no, "unknown record '" + kind + "'");
    }
  }
  return raw;
}

RawTopology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file '" + path + "'");
  return read_topology(in);
}

void write_topology(std::ostream& out, const RawTopology& raw) {
  out << "# q2sfc topology v1\n";
  for (const auto& t : raw.types) out << "type " << t << "\n";
  for (const auto& s : raw.servers) out << "server " << s.name << " spare=" << s.spare_slots << "\n";
  for (const auto& sw : raw.switches) {
    out << "switch " << sw.name;
    write_qos(out, sw.qos);
    out << "\n";
  }
  for (const auto& l : raw.links) {
    out << "link " << l.endpoint_a << " " << l.endpoint_b;
    if (!l.name.empty()) out << " name=" << l.name;
    write_qos(out, l.qos);
    out << "\n";
  }
  for (const auto& i : raw.instances) {
    out << "instance " << i.name << " type=" << i.type << " server=" << i.server
        << " status=" << to_string(i.status);
    write_qos(out, i.node_qos);
    out << "\n";
  }
}

}  // namespace q2sfc
