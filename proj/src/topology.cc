// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "mstpath/topology.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.h"

namespace mstpath {

using internal::Json;
using internal::OrderedJson;

namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kValidation, what);
}

std::string Describe(const PortRef& ref) {
  return ref.node + ":" + std::to_string(ref.port);
}

}  // namespace

Topology Topology::Build(std::vector<Node> nodes, std::vector<Link> links,
                         std::map<std::string, std::vector<NodeId>> groups,
                         bool check_connectivity) {
  Topology t;
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& x, const Node& y) { return x.id < y.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.id.empty()) Invalid("empty node name");
    if (i > 0 && nodes[i - 1].id == n.id) Invalid("duplicate node " + n.id);
    if (n.is_host()) {
      if (!n.ipv4 || !n.mac) Invalid("host " + n.id + " needs ipv4 and mac");
      if (!n.port_macs.empty()) Invalid("host " + n.id + " has port_macs");
    } else if (n.ipv4 || n.mac) {
      Invalid("switch " + n.id + " carries a host address");
    }
  }
  t.nodes_ = std::move(nodes);

  std::set<Ipv4Addr> seen_ips;
  for (const Node& n : t.nodes_) {
    if (n.is_host() && !seen_ips.insert(*n.ipv4).second) {
      Invalid("duplicate IPv4 " + n.ipv4->ToString() + " (host " + n.id + ")");
    }
  }

  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    for (const PortRef* end : {&l.a, &l.b}) {
      const Node* n = t.Find(end->node);
      if (n == nullptr) {
        Invalid("dangling port " + Describe(*end) + ": unknown node");
      }
      if (end->port <= 0) Invalid("non-positive port " + Describe(*end));
      if (n->is_switch() && !n->port_macs.contains(end->port)) {
        Invalid("dangling port " + Describe(*end) + ": switch has no MAC for it");
      }
      if (!t.port_index_.emplace(*end, i).second) {
        Invalid("port " + Describe(*end) + " used by more than one link");
      }
    }
    if (l.a.node == l.b.node) Invalid("self-loop on " + l.a.node);
    if (l.weight <= 0) {
      Invalid("non-positive weight on link " + Describe(l.a) + "-" +
              Describe(l.b));
    }
  }
  t.links_ = std::move(links);

  for (const Node& n : t.nodes_) {
    if (!n.is_host()) continue;
    int degree = 0;
    for (const Link& l : t.links_) {
      if (l.a.node != n.id && l.b.node != n.id) continue;
      ++degree;
      if (t.At(l.Other(n.id).node).is_host()) {
        Invalid("host " + n.id + " linked to another host");
      }
    }
    if (degree != 1) {
      Invalid("host " + n.id + " has " + std::to_string(degree) +
              " links, expected 1");
    }
  }

  for (const auto& [name, members] : groups) {
    for (const NodeId& m : members) {
      const Node* n = t.Find(m);
      if (n == nullptr || !n->is_host()) {
        Invalid("group " + name + " member " + m + " is not a host");
      }
    }
  }
  t.groups_ = std::move(groups);

  if (check_connectivity && !t.nodes_.empty()) {
    std::set<NodeId> reached{t.nodes_.front().id};
    std::vector<NodeId> stack{t.nodes_.front().id};
    while (!stack.empty()) {
      NodeId cur = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : Neighbors(t, cur)) {
        if (reached.insert(nb.remote.node).second) {
          stack.push_back(nb.remote.node);
        }
      }
    }
    for (const Node& n : t.nodes_) {
      if (!reached.contains(n.id)) {
        Invalid("DisconnectedGraph: " + n.id + " unreachable from " +
                t.nodes_.front().id);
      }
    }
  }
  return t;
}

const Node* Topology::Find(std::string_view id) const {
  auto it = std::lower_bound(
      nodes_.begin(), nodes_.end(), id,
      [](const Node& n, std::string_view key) { return n.id < key; });
  if (it == nodes_.end() || it->id != id) return nullptr;
  return &*it;
}

const Node& Topology::At(std::string_view id) const {
  const Node* n = Find(id);
  if (n == nullptr) {
    throw Error(ErrorCode::kUnknownNode, "no node named '" + std::string(id) + "'");
  }
  return *n;
}

std::vector<NodeId> Topology::Switches() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes_) {
    if (n.is_switch()) out.push_back(n.id);
  }
  return out;
}

std::vector<NodeId> Topology::Hosts() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes_) {
    if (n.is_host()) out.push_back(n.id);
  }
  return out;
}

const Node* Topology::HostByIpv4(Ipv4Addr addr) const {
  for (const Node& n : nodes_) {
    if (n.is_host() && n.ipv4 == addr) return &n;
  }
  return nullptr;
}

const Link* Topology::LinkAt(const PortRef& ref) const {
  auto it = port_index_.find(ref);
  return it == port_index_.end() ? nullptr : &links_[it->second];
}

PortRef Topology::Attachment(std::string_view host) const {
  const Node& n = At(host);
  if (!n.is_host()) {
    throw Error(ErrorCode::kUnknownNode, std::string(host) + " is not a host");
  }
  for (const Link& l : links_) {
    if (l.a.node == host) return l.b;
    if (l.b.node == host) return l.a;
  }
  throw Error(ErrorCode::kValidation, "host " + std::string(host) + " is unattached");
}

MacAddr Topology::ReceivingMac(const PortRef& ref) const {
  const Node& n = At(ref.node);
  if (n.is_host()) return *n.mac;
  auto it = n.port_macs.find(ref.port);
  if (it == n.port_macs.end()) {
    throw Error(ErrorCode::kValidation, "no MAC for port " + Describe(ref));
  }
  return it->second;
}

std::vector<Neighbor> Neighbors(const Topology& topology, std::string_view node) {
  topology.At(node);
  std::vector<Neighbor> out;
  const auto& links = topology.links();
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    if (l.a.node == node) out.push_back({l.a, l.b, l.weight, i});
    if (l.b.node == node) out.push_back({l.b, l.a, l.weight, i});
  }
  std::sort(out.begin(), out.end(), [](const Neighbor& x, const Neighbor& y) {
    return x.local.port < y.local.port;
  });
  return out;
}

namespace {

PortRef ParsePortRef(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_string() ||
      !v[1].is_number_integer()) {
    throw Error(ErrorCode::kParse, path + ": expected [node, port]");
  }
  return PortRef{v[0].get<std::string>(), v[1].get<int>()};
}

template <typename T, typename F>
T Field(const std::string& path, F&& parse) {
  try {
    return parse();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

}  // namespace

Topology ParseTopology(std::string_view text) {
  Json doc = internal::ParseJson(text, "topology");
  const Json& jnodes = internal::Require(doc, "nodes", "topology");
  const Json& jlinks = internal::Require(doc, "links", "topology");
  if (!jnodes.is_array() || !jlinks.is_array()) {
    throw Error(ErrorCode::kParse, "topology: nodes and links must be lists");
  }

  std::vector<Node> nodes;
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const Json& jn = jnodes[i];
    std::string path = "nodes[" + std::to_string(i) + "]";
    Node n;
    n.id = internal::RequireString(jn, "name", path);
    std::string kind = internal::RequireString(jn, "kind", path);
    if (kind == "switch") {
      n.kind = NodeKind::kSwitch;
    } else if (kind == "host") {
      n.kind = NodeKind::kHost;
    } else {
      throw Error(ErrorCode::kParse, path + ".kind: unknown kind '" + kind + "'");
    }
    if (jn.contains("ipv4")) {
      std::string s = internal::RequireString(jn, "ipv4", path);
      n.ipv4 = Field<Ipv4Addr>(path + ".ipv4", [&] { return Ipv4Addr::Parse(s); });
    }
    if (jn.contains("mac")) {
      std::string s = internal::RequireString(jn, "mac", path);
      n.mac = Field<MacAddr>(path + ".mac", [&] { return MacAddr::Parse(s); });
    }
    if (jn.contains("port_macs")) {
      const Json& pm = jn["port_macs"];
      if (!pm.is_object()) {
        throw Error(ErrorCode::kParse, path + ".port_macs: expected an object");
      }
      for (const auto& [port, mac] : pm.items()) {
        std::string p = path + ".port_macs." + port;
        int port_no = Field<int>(p, [&] {
          std::size_t used = 0;
          int v = 0;
          try {
            v = std::stoi(port, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used == 0 || used != port.size()) {
            throw Error(ErrorCode::kParse, "port must be an integer");
          }
          return v;
        });
        if (!mac.is_string()) {
          throw Error(ErrorCode::kParse, p + ": expected a MAC string");
        }
        n.port_macs[port_no] = Field<MacAddr>(
            p, [&] { return MacAddr::Parse(mac.get<std::string>()); });
      }
    }
    nodes.push_back(std::move(n));
  }

  std::vector<Link> links;
  for (std::size_t i = 0; i < jlinks.size(); ++i) {
    const Json& jl = jlinks[i];
    std::string path = "links[" + std::to_string(i) + "]";
    Link l;
    l.a = ParsePortRef(internal::Require(jl, "a", path), path + ".a");
    l.b = ParsePortRef(internal::Require(jl, "b", path), path + ".b");
    if (jl.contains("weight")) {
      l.weight = internal::JsonToRational(jl["weight"], path + ".weight");
    }
    links.push_back(std::move(l));
  }

  std::map<std::string, std::vector<NodeId>> groups;
  if (doc.contains("groups")) {
    const Json& jg = doc["groups"];
    if (!jg.is_object()) {
      throw Error(ErrorCode::kParse, "groups: expected an object");
    }
    for (const auto& [name, members] : jg.items()) {
      if (!members.is_array()) {
        throw Error(ErrorCode::kParse, "groups." + name + ": expected a list");
      }
      for (const Json& m : members) {
        if (!m.is_string()) {
          throw Error(ErrorCode::kParse, "groups." + name + ": expected names");
        }
        groups[name].push_back(m.get<std::string>());
      }
    }
  }
  return Topology::Build(std::move(nodes), std::move(links), std::move(groups));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kParse, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Topology LoadTopology(const std::filesystem::path& path) {
  return ParseTopology(ReadFile(path));
}

std::string SerializeTopology(const Topology& topology) {
  OrderedJson doc;
  OrderedJson jnodes = OrderedJson::array();
  for (const Node& n : topology.nodes()) {
    OrderedJson jn;
    jn["name"] = n.id;
    jn["kind"] = n.is_host() ? "host" : "switch";
    if (n.ipv4) jn["ipv4"] = n.ipv4->ToString();
    if (n.mac) jn["mac"] = n.mac->ToString();
    if (!n.port_macs.empty()) {
      OrderedJson pm = OrderedJson::object();
      for (const auto& [port, mac] : n.port_macs) {
        pm[std::to_string(port)] = mac.ToString();
      }
      jn["port_macs"] = std::move(pm);
    }
    jnodes.push_back(std::move(jn));
  }
  OrderedJson jlinks = OrderedJson::array();
  for (const Link& l : topology.links()) {
    OrderedJson jl;
    jl["a"] = OrderedJson::array({l.a.node, l.a.port});
    jl["b"] = OrderedJson::array({l.b.node, l.b.port});
    jl["weight"] = internal::RationalToJson(l.weight);
    jlinks.push_back(std::move(jl));
  }
  doc["nodes"] = std::move(jnodes);
  doc["links"] = std::move(jlinks);
  if (!topology.groups().empty()) {
    OrderedJson jg = OrderedJson::object();
    for (const auto& [name, members] : topology.groups()) jg[name] = members;
    doc["groups"] = std::move(jg);
  }
  return doc.dump(2) + "\n";
}

bool SameTopology(const Topology& a, const Topology& b) {
  if (a.nodes() != b.nodes() || a.groups() != b.groups()) return false;
  auto canonical = [](const Topology& t) {
    std::set<std::tuple<PortRef, PortRef, Rational>> out;
    for (const Link& l : t.links()) {
      auto [lo, hi] = std::minmax(l.a, l.b);
      out.emplace(lo, hi, l.weight);
    }
    return out;
  };
  return canonical(a) == canonical(b);
}

}  // namespace mstpath
