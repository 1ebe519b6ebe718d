// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

// Network model: switches, hosts (base stations), numbered ports and
// weighted links, plus the JSON topology file reader/writer.

#ifndef MSTPATH_TOPOLOGY_H_
#define MSTPATH_TOPOLOGY_H_

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mstpath/types.h"

namespace mstpath {

using NodeId = std::string;

enum class NodeKind { kSwitch, kHost };

struct PortRef {
  NodeId node;
  int port = 0;

  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::kSwitch;
  // Hosts only.
  std::optional<Ipv4Addr> ipv4;
  std::optional<MacAddr> mac;
  // Switches only.
  std::map<int, MacAddr> port_macs;

  bool is_host() const { return kind == NodeKind::kHost; }
  bool is_switch() const { return kind == NodeKind::kSwitch; }

  friend bool operator==(const Node&, const Node&) = default;
};

struct Link {
  PortRef a;
  PortRef b;
  Rational weight{1};

  // The endpoint on `node`'s side; `node` must be one of the two ends.
  const PortRef& End(std::string_view node) const {
    return a.node == node ? a : b;
  }
  const PortRef& Other(std::string_view node) const {
    return a.node == node ? b : a;
  }

  friend bool operator==(const Link&, const Link&) = default;
};

// One incident link seen from `local.node`.
struct Neighbor {
  PortRef local;
  PortRef remote;
  Rational weight;
  std::size_t link_index = 0;
};

class Topology {
 public:
  Topology() = default;

  // Validates every invariant and throws Error(kValidation) naming the first
  // one violated. `check_connectivity` exists so that graph algorithms can be
  // exercised on deliberately disconnected inputs.
  static Topology Build(std::vector<Node> nodes, std::vector<Link> links,
                        std::map<std::string, std::vector<NodeId>> groups = {},
                        bool check_connectivity = true);

  // Sorted by id.
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::map<std::string, std::vector<NodeId>>& groups() const {
    return groups_;
  }

  const Node* Find(std::string_view id) const;
  // Throws Error(kUnknownNode).
  const Node& At(std::string_view id) const;
  bool Contains(std::string_view id) const { return Find(id) != nullptr; }

  std::vector<NodeId> Switches() const;
  std::vector<NodeId> Hosts() const;
  const Node* HostByIpv4(Ipv4Addr addr) const;

  // Link attached at (node, port), or nullptr.
  const Link* LinkAt(const PortRef& ref) const;

  // The switch-side port a host is attached through.
  PortRef Attachment(std::string_view host) const;

  // MAC that a frame leaving toward `ref` must carry: the host MAC when
  // `ref` is a host, else that switch port's MAC.
  MacAddr ReceivingMac(const PortRef& ref) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::map<std::string, std::vector<NodeId>> groups_;
  std::map<PortRef, std::size_t> port_index_;
};

// Incident links of `node` ordered by local port number. Throws
// Error(kUnknownNode).
std::vector<Neighbor> Neighbors(const Topology& topology, std::string_view node);

Topology ParseTopology(std::string_view text);
Topology LoadTopology(const std::filesystem::path& path);
std::string SerializeTopology(const Topology& topology);

// Set equality on nodes and links (link endpoint order and list order are
// ignored).
bool SameTopology(const Topology& a, const Topology& b);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace mstpath

#endif  // MSTPATH_TOPOLOGY_H_
