// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

// Minimum spanning tree over the switch graph, its orientation at a root,
// and path queries on the oriented tree.

#ifndef MSTPATH_MST_H_
#define MSTPATH_MST_H_

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "mstpath/topology.h"

namespace mstpath {

struct TreeEdge {
  NodeId u;  // u < v by name
  NodeId v;
  std::size_t link_index = 0;
  Rational weight;

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

// Switch-to-switch edges of a spanning tree, kept sorted by (u, v, link).
struct EdgeSet {
  std::vector<TreeEdge> edges;

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;
};

// Kruskal over switch-to-switch links, visiting edges by
// (weight, lower endpoint name, higher endpoint name, lower port).
// Throws Error(kDisconnectedGraph).
EdgeSet ComputeMst(const Topology& topology);

// Same algorithm, but equal-weight edges closer to `root` (by hop count in
// the switch graph) are visited first, so the chosen tree among equal-cost
// candidates is shallow at the root. Still a minimum spanning tree.
// `root` may name a host, meaning its attachment switch.
EdgeSet ComputeMst(const Topology& topology, std::string_view root);

Rational TotalWeight(const EdgeSet& mst);

// Every spanning tree of the switch graph exactly once. Test oracle; refuses
// more than 8 switches with Error(kTooLarge).
std::vector<EdgeSet> EnumerateSpanningTrees(const Topology& topology);

// Switch for a root designation: itself, or a host's attachment switch.
// Throws Error(kUnknownRoot).
NodeId ResolveRootSwitch(const Topology& topology, std::string_view root);

struct ParentLink {
  NodeId parent;
  int local_port = 0;   // on the child, facing the parent
  int parent_port = 0;  // on the parent, facing the child
  std::size_t link_index = 0;

  friend bool operator==(const ParentLink&, const ParentLink&) = default;
};

class SpanningTree {
 public:
  SpanningTree() = default;
  SpanningTree(NodeId root, std::map<NodeId, ParentLink> parents);

  const NodeId& root() const { return root_; }
  bool Contains(std::string_view node) const;
  // nullptr for the root. Throws Error(kUnknownNode) for non-members.
  const ParentLink* Parent(std::string_view node) const;
  const std::vector<NodeId>& Children(std::string_view node) const;
  const std::map<NodeId, ParentLink>& parents() const { return parents_; }
  // Root first, then every other member in name order.
  std::vector<NodeId> Members() const;
  std::size_t size() const { return parents_.size() + 1; }

  friend bool operator==(const SpanningTree& a, const SpanningTree& b) {
    return a.root_ == b.root_ && a.parents_ == b.parents_;
  }

 private:
  NodeId root_;
  std::map<NodeId, ParentLink> parents_;
  std::map<NodeId, std::vector<NodeId>> children_;
};

// Orients `mst` at `root` (switch or host designation) and hangs every host
// off its attachment switch. Throws Error(kUnknownRoot).
SpanningTree OrientTree(const Topology& topology, const EdgeSet& mst,
                        std::string_view root);

// The unique simple path from `from` to `to`, both ends included.
// Throws Error(kUnknownNode).
std::vector<NodeId> TreePath(const SpanningTree& tree, std::string_view from,
                             std::string_view to);

}  // namespace mstpath

#endif  // MSTPATH_MST_H_
