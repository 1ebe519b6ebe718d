// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "mstpath/mst.h"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <tuple>

namespace mstpath {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

struct Candidate {
  TreeEdge edge;
  int min_port = 0;
  int depth = 0;
  std::size_t iu = 0;
  std::size_t iv = 0;
};

// Switch-to-switch links as candidates; switch indices follow name order.
std::vector<Candidate> SwitchEdges(const Topology& t,
                                   const std::vector<NodeId>& switches) {
  auto index_of = [&](const NodeId& id) {
    return static_cast<std::size_t>(
        std::lower_bound(switches.begin(), switches.end(), id) -
        switches.begin());
  };
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < t.links().size(); ++i) {
    const Link& l = t.links()[i];
    if (!t.At(l.a.node).is_switch() || !t.At(l.b.node).is_switch()) continue;
    Candidate c;
    bool a_first = l.a.node < l.b.node;
    c.edge = TreeEdge{a_first ? l.a.node : l.b.node,
                      a_first ? l.b.node : l.a.node, i, l.weight};
    c.min_port = std::min(l.a.port, l.b.port);
    c.iu = index_of(c.edge.u);
    c.iv = index_of(c.edge.v);
    out.push_back(std::move(c));
  }
  return out;
}

void SortEdgeSet(EdgeSet& set) {
  std::sort(set.edges.begin(), set.edges.end(),
            [](const TreeEdge& x, const TreeEdge& y) {
              return std::tie(x.u, x.v, x.link_index) <
                     std::tie(y.u, y.v, y.link_index);
            });
}

EdgeSet Kruskal(const Topology& t, const std::vector<int>* depth) {
  std::vector<NodeId> switches = t.Switches();
  std::vector<Candidate> cands = SwitchEdges(t, switches);
  if (depth != nullptr) {
    for (Candidate& c : cands) {
      c.depth = std::max((*depth)[c.iu], (*depth)[c.iv]);
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& x, const Candidate& y) {
              return std::tie(x.edge.weight, x.depth, x.edge.u, x.edge.v,
                              x.min_port) < std::tie(y.edge.weight, y.depth,
                                                     y.edge.u, y.edge.v,
                                                     y.min_port);
            });
  DisjointSets sets(switches.size());
  EdgeSet out;
  for (const Candidate& c : cands) {
    if (sets.Union(c.iu, c.iv)) out.edges.push_back(c.edge);
  }
  if (!switches.empty() && out.edges.size() + 1 != switches.size()) {
    throw Error(ErrorCode::kDisconnectedGraph,
                "switch graph is not connected");
  }
  SortEdgeSet(out);
  return out;
}

}  // namespace

EdgeSet ComputeMst(const Topology& topology) { return Kruskal(topology, nullptr); }

EdgeSet ComputeMst(const Topology& topology, std::string_view root) {
  NodeId root_switch = ResolveRootSwitch(topology, root);
  std::vector<NodeId> switches = topology.Switches();
  std::vector<Candidate> cands = SwitchEdges(topology, switches);
  std::vector<std::vector<std::size_t>> adj(switches.size());
  for (const Candidate& c : cands) {
    adj[c.iu].push_back(c.iv);
    adj[c.iv].push_back(c.iu);
  }
  // Unreachable switches keep a large depth; Kruskal reports the disconnect.
  std::vector<int> depth(switches.size(), static_cast<int>(switches.size()));
  std::size_t start = static_cast<std::size_t>(
      std::lower_bound(switches.begin(), switches.end(), root_switch) -
      switches.begin());
  depth[start] = 0;
  std::deque<std::size_t> queue{start};
  std::vector<bool> seen(switches.size(), false);
  seen[start] = true;
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t nxt : adj[cur]) {
      if (seen[nxt]) continue;
      seen[nxt] = true;
      depth[nxt] = depth[cur] + 1;
      queue.push_back(nxt);
    }
  }
  return Kruskal(topology, &depth);
}

Rational TotalWeight(const EdgeSet& mst) {
  Rational sum(0);
  for (const TreeEdge& e : mst.edges) sum += e.weight;
  return sum;
}

std::vector<EdgeSet> EnumerateSpanningTrees(const Topology& topology) {
  std::vector<NodeId> switches = topology.Switches();
  if (switches.size() > 8) {
    throw Error(ErrorCode::kTooLarge,
                std::to_string(switches.size()) + " switches, limit is 8");
  }
  std::vector<Candidate> cands = SwitchEdges(topology, switches);
  std::vector<EdgeSet> out;
  if (switches.empty()) return out;
  const std::size_t need = switches.size() - 1;
  std::vector<std::size_t> chosen;

  // Include/exclude each candidate in order; a subset of n-1 edges without
  // a cycle is a spanning tree.
  auto recurse = [&](auto& self, std::size_t next) -> void {
    if (chosen.size() == need) {
      EdgeSet set;
      for (std::size_t i : chosen) set.edges.push_back(cands[i].edge);
      SortEdgeSet(set);
      out.push_back(std::move(set));
      return;
    }
    if (cands.size() - next < need - chosen.size()) return;
    DisjointSets sets(switches.size());
    for (std::size_t i : chosen) sets.Union(cands[i].iu, cands[i].iv);
    if (sets.Find(cands[next].iu) != sets.Find(cands[next].iv)) {
      chosen.push_back(next);
      self(self, next + 1);
      chosen.pop_back();
    }
    self(self, next + 1);
  };
  recurse(recurse, 0);
  return out;
}

NodeId ResolveRootSwitch(const Topology& topology, std::string_view root) {
  const Node* n = topology.Find(root);
  if (n == nullptr) {
    throw Error(ErrorCode::kUnknownRoot, "no node named '" + std::string(root) + "'");
  }
  if (n->is_switch()) return n->id;
  return topology.Attachment(root).node;
}

SpanningTree::SpanningTree(NodeId root, std::map<NodeId, ParentLink> parents)
    : root_(std::move(root)), parents_(std::move(parents)) {
  for (const auto& [child, link] : parents_) {
    children_[link.parent].push_back(child);
  }
}

bool SpanningTree::Contains(std::string_view node) const {
  return node == root_ || parents_.contains(NodeId(node));
}

const ParentLink* SpanningTree::Parent(std::string_view node) const {
  if (node == root_) return nullptr;
  auto it = parents_.find(NodeId(node));
  if (it == parents_.end()) {
    throw Error(ErrorCode::kUnknownNode,
                std::string(node) + " is not in the tree");
  }
  return &it->second;
}

const std::vector<NodeId>& SpanningTree::Children(std::string_view node) const {
  static const std::vector<NodeId> kNone;
  auto it = children_.find(NodeId(node));
  return it == children_.end() ? kNone : it->second;
}

std::vector<NodeId> SpanningTree::Members() const {
  std::vector<NodeId> out{root_};
  for (const auto& [child, link] : parents_) out.push_back(child);
  return out;
}

SpanningTree OrientTree(const Topology& topology, const EdgeSet& mst,
                        std::string_view root) {
  NodeId root_switch = ResolveRootSwitch(topology, root);
  std::map<NodeId, std::vector<const TreeEdge*>> adj;
  for (const TreeEdge& e : mst.edges) {
    adj[e.u].push_back(&e);
    adj[e.v].push_back(&e);
  }
  std::map<NodeId, ParentLink> parents;
  std::deque<NodeId> queue{root_switch};
  std::set<NodeId> seen{root_switch};
  while (!queue.empty()) {
    NodeId cur = queue.front();
    queue.pop_front();
    for (const TreeEdge* e : adj[cur]) {
      const NodeId& next = e->u == cur ? e->v : e->u;
      if (!seen.insert(next).second) continue;
      const Link& l = topology.links().at(e->link_index);
      parents[next] = ParentLink{cur, l.End(next).port, l.End(cur).port,
                                 e->link_index};
      queue.push_back(next);
    }
  }
  for (const NodeId& s : topology.Switches()) {
    if (!seen.contains(s)) {
      throw Error(ErrorCode::kValidation,
                  "edge set does not reach switch " + s + " from " + root_switch);
    }
  }
  for (const NodeId& h : topology.Hosts()) {
    PortRef at = topology.Attachment(h);
    const Link* l = topology.LinkAt(at);
    parents[h] = ParentLink{at.node, l->End(h).port, at.port,
                            static_cast<std::size_t>(l - topology.links().data())};
  }
  return SpanningTree(root_switch, std::move(parents));
}

std::vector<NodeId> TreePath(const SpanningTree& tree, std::string_view from,
                             std::string_view to) {
  auto ancestors = [&](std::string_view node) {
    std::vector<NodeId> chain{NodeId(node)};
    for (const ParentLink* p = tree.Parent(node); p != nullptr;
         p = tree.Parent(p->parent)) {
      chain.push_back(p->parent);
    }
    return chain;
  };
  std::vector<NodeId> up = ancestors(from);
  std::vector<NodeId> down = ancestors(to);
  // Strip the shared suffix (root side), keeping the lowest common ancestor.
  while (up.size() > 1 && down.size() > 1 &&
         up[up.size() - 2] == down[down.size() - 2]) {
    up.pop_back();
    down.pop_back();
  }
  std::vector<NodeId> path = up;
  for (auto it = down.rbegin() + 1; it != down.rend(); ++it) path.push_back(*it);
  return path;
}

}  // namespace mstpath
