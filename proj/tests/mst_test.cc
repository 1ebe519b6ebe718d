// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "mstpath/mst.h"

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_support.h"

namespace mstpath {
namespace {

using testing::LoadFixture;
using testing::MakeTopology;

std::set<std::pair<NodeId, NodeId>> Pairs(const EdgeSet& s) {
  std::set<std::pair<NodeId, NodeId>> out;
  for (const TreeEdge& e : s.edges) out.emplace(e.u, e.v);
  return out;
}

Topology K4() {
  return MakeTopology(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
}

TEST(ComputeMstTest, Triangle) {
  Topology t = LoadFixture("triangle.json");
  EdgeSet mst = ComputeMst(t);
  EXPECT_EQ(Pairs(mst), (std::set<std::pair<NodeId, NodeId>>{{"s1", "s2"}, {"s1", "s3"}}));
  EXPECT_EQ(TotalWeight(mst), Rational(3));
}

TEST(ComputeMstTest, PathGraphKeepsEveryEdge) {
  Topology t = LoadFixture("line3.json");
  EXPECT_EQ(Pairs(ComputeMst(t)),
            (std::set<std::pair<NodeId, NodeId>>{{"s1", "s2"}, {"s2", "s3"}}));
}

TEST(ComputeMstTest, K4TieBreakMatchesBruteForce) {
  Topology t = K4();
  EdgeSet mst = ComputeMst(t);
  EXPECT_EQ(mst, testing::BruteForceMst(t));
  EXPECT_EQ(Pairs(mst), (std::set<std::pair<NodeId, NodeId>>{
                            {"s1", "s2"}, {"s1", "s3"}, {"s1", "s4"}}));
}

TEST(ComputeMstTest, PaperTopoDropsHeavyLink) {
  Topology t = LoadFixture("paper-topo.json");
  EdgeSet mst = ComputeMst(t);
  EXPECT_EQ(mst.edges.size(), 4u);
  EXPECT_EQ(TotalWeight(mst), Rational(4));
  EXPECT_FALSE(Pairs(mst).contains({"s1", "s2"}));
}

TEST(ComputeMstTest, SingleSwitchIsEmpty) {
  Topology t = MakeTopology(1, {}, {1, 1});
  EXPECT_TRUE(ComputeMst(t).edges.empty());
  EXPECT_EQ(TotalWeight(EdgeSet{}), Rational(0));
}

TEST(ComputeMstTest, DisconnectedSwitchGraph) {
  Topology t = MakeTopology(4, {{1, 2}, {3, 4}}, {}, /*check_connectivity=*/false);
  try {
    ComputeMst(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDisconnectedGraph);
  }
}

TEST(ComputeMstTest, ParallelLinksPickCheaper) {
  Topology t = MakeTopology(2, {{1, 2, Rational(3)}, {1, 2, Rational(1, 2)}});
  EdgeSet mst = ComputeMst(t);
  ASSERT_EQ(mst.edges.size(), 1u);
  EXPECT_EQ(mst.edges[0].weight, Rational(1, 2));
}

TEST(ComputeMstTest, UnitWeightTreeWeighsNMinusOne) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 9; ++n) {
    std::vector<testing::SwitchLink> links;
    for (int s = 2; s <= n; ++s) {
      links.push_back({std::uniform_int_distribution<int>(1, s - 1)(rng), s});
    }
    EXPECT_EQ(TotalWeight(ComputeMst(MakeTopology(n, links))), Rational(n - 1));
  }
}

TEST(ComputeMstTest, RootedVariantPrefersShallowTrees) {
  // Unit ring: the rooted tie-break keeps both root edges.
  Topology t = LoadFixture("ring4.json");
  EdgeSet at_s1 = ComputeMst(t, "s1");
  EdgeSet at_s3 = ComputeMst(t, "s3");
  EXPECT_EQ(Pairs(at_s1), (std::set<std::pair<NodeId, NodeId>>{
                              {"s1", "s2"}, {"s1", "s4"}, {"s2", "s3"}}));
  EXPECT_EQ(Pairs(at_s3), (std::set<std::pair<NodeId, NodeId>>{
                              {"s1", "s2"}, {"s2", "s3"}, {"s3", "s4"}}));
  EXPECT_EQ(ComputeMst(t, "h1"), at_s1);
  EXPECT_THROW(ComputeMst(t, "s9"), Error);
}

TEST(EnumerateTest, Counts) {
  EXPECT_EQ(EnumerateSpanningTrees(LoadFixture("triangle.json")).size(), 3u);
  EXPECT_EQ(EnumerateSpanningTrees(K4()).size(), 16u);
  EXPECT_EQ(EnumerateSpanningTrees(LoadFixture("line3.json")).size(), 1u);
  EXPECT_EQ(testing::KirchhoffCount(K4()), 16);
}

TEST(EnumerateTest, TriangleWeights) {
  std::multiset<Rational> weights;
  for (const EdgeSet& s : EnumerateSpanningTrees(LoadFixture("triangle.json"))) {
    weights.insert(TotalWeight(s));
  }
  EXPECT_EQ(weights, (std::multiset<Rational>{3, 4, 5}));
}

TEST(EnumerateTest, RefusesLargeGraphs) {
  std::vector<testing::SwitchLink> links;
  for (int s = 2; s <= 9; ++s) links.push_back({s - 1, s});
  try {
    EnumerateSpanningTrees(MakeTopology(9, links));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

// Random multigraphs: enumeration count against the matrix-tree theorem, each
// enumerated set is a distinct spanning tree, and Kruskal against both the
// enumeration minimum and the brute-force tie-broken optimum.
TEST(MstPropertyTest, OptimalityAndEnumeration) {
  std::mt19937_64 rng(2026);
  testing::RandomOptions opts;
  opts.max_switches = 7;
  for (int i = 0; i < 150; ++i) {
    Topology t = testing::RandomTopology(rng, opts);
    std::vector<EdgeSet> all = EnumerateSpanningTrees(t);
    ASSERT_EQ(static_cast<long long>(all.size()), testing::KirchhoffCount(t));
    std::set<std::vector<std::size_t>> distinct;
    Rational best = TotalWeight(all.front());
    for (const EdgeSet& s : all) {
      ASSERT_EQ(s.edges.size(), t.Switches().size() - 1);
      std::vector<std::size_t> ids;
      for (const TreeEdge& e : s.edges) ids.push_back(e.link_index);
      std::sort(ids.begin(), ids.end());
      distinct.insert(ids);
      best = std::min(best, TotalWeight(s));
    }
    EXPECT_EQ(distinct.size(), all.size());

    EdgeSet mst = ComputeMst(t);
    EXPECT_EQ(TotalWeight(mst), best);
    EXPECT_EQ(mst, testing::BruteForceMst(t));
    for (const NodeId& root : t.Switches()) {
      EdgeSet rooted = ComputeMst(t, root);
      EXPECT_EQ(TotalWeight(rooted), best);
      EXPECT_EQ(rooted, testing::BruteForceMst(t, root)) << "root " << root;
    }
  }
}

TEST(MstPropertyTest, DeterministicUnderTies) {
  std::mt19937_64 rng(5);
  testing::RandomOptions opts;
  opts.max_switches = 9;
  opts.rational_weights = false;
  opts.extra_edge_probability = 0.7;
  for (int i = 0; i < 40; ++i) {
    Topology t = testing::RandomTopology(rng, opts);
    EdgeSet first = ComputeMst(t);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(ComputeMst(t), first);
    // Reparsing reorders nothing that matters.
    EXPECT_EQ(ComputeMst(ParseTopology(SerializeTopology(t))), first);
  }
}

TEST(ResolveRootTest, HostMapsToSwitch) {
  Topology t = LoadFixture("paper-topo.json");
  EXPECT_EQ(ResolveRootSwitch(t, "s3"), "s3");
  EXPECT_EQ(ResolveRootSwitch(t, "h1"), "s1");
  try {
    ResolveRootSwitch(t, "nowhere");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownRoot);
  }
}

TEST(OrientTreeTest, PathRootedAtEitherEnd) {
  Topology t = LoadFixture("line3.json");
  EdgeSet mst = ComputeMst(t);
  SpanningTree a = OrientTree(t, mst, "s1");
  EXPECT_EQ(a.Parent("s1"), nullptr);
  EXPECT_EQ(a.Parent("s2")->parent, "s1");
  EXPECT_EQ(a.Parent("s3")->parent, "s2");
  SpanningTree b = OrientTree(t, mst, "s3");
  EXPECT_EQ(b.Parent("s3"), nullptr);
  EXPECT_EQ(b.Parent("s2")->parent, "s3");
  EXPECT_EQ(b.Parent("s1")->parent, "s2");
  EXPECT_EQ(b.Members().front(), "s3");
}

TEST(OrientTreeTest, PaperTopoHostHangsOffPortOne) {
  Topology t = LoadFixture("paper-topo.json");
  SpanningTree tree = OrientTree(t, ComputeMst(t), "h1");
  EXPECT_EQ(tree.root(), "s1");
  const ParentLink* p = tree.Parent("h1");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->parent, "s1");
  EXPECT_EQ(p->parent_port, 1);
  EXPECT_EQ(tree.size(), t.nodes().size());
  EXPECT_THROW(tree.Parent("zz"), Error);
  EXPECT_THROW(OrientTree(t, ComputeMst(t), "zz"), Error);
}

TEST(TreePathTest, Basics) {
  Topology t = LoadFixture("line3.json");
  SpanningTree tree = OrientTree(t, ComputeMst(t), "s2");
  EXPECT_EQ(TreePath(tree, "s1", "s1"), (std::vector<NodeId>{"s1"}));
  EXPECT_EQ(TreePath(tree, "s1", "s3"), (std::vector<NodeId>{"s1", "s2", "s3"}));
  EXPECT_EQ(TreePath(tree, "h1", "h3"),
            (std::vector<NodeId>{"h1", "s1", "s2", "s3", "h3"}));
  EXPECT_THROW(TreePath(tree, "s1", "s9"), Error);
}

TEST(TreePropertyTest, OrientationSoundnessAndPaths) {
  std::mt19937_64 rng(99);
  testing::RandomOptions opts;
  opts.max_switches = 10;
  opts.max_hosts = 8;
  for (int i = 0; i < 60; ++i) {
    Topology t = testing::RandomTopology(rng, opts);
    std::vector<NodeId> switches = t.Switches();
    NodeId root = switches[rng() % switches.size()];
    EdgeSet mst = ComputeMst(t, root);
    SpanningTree tree = OrientTree(t, mst, root);

    // Parent pointers reach the root within #nodes - 1 hops.
    for (const Node& n : t.nodes()) {
      NodeId cur = n.id;
      std::size_t hops = 0;
      while (const ParentLink* p = tree.Parent(cur)) {
        cur = p->parent;
        ASSERT_LT(++hops, t.nodes().size());
      }
      EXPECT_EQ(cur, root);
    }

    // (child, parent) links = MST edges plus host attachments.
    std::set<std::size_t> links;
    for (const auto& [child, p] : tree.parents()) {
      const Link& l = t.links()[p.link_index];
      EXPECT_EQ(l.End(child).port, p.local_port);
      EXPECT_EQ(l.Other(child), (PortRef{p.parent, p.parent_port}));
      links.insert(p.link_index);
    }
    std::set<std::size_t> expected;
    for (const TreeEdge& e : mst.edges) expected.insert(e.link_index);
    for (const NodeId& h : t.Hosts()) {
      expected.insert(t.LinkAt({h, 1}) - t.links().data());
    }
    EXPECT_EQ(links, expected);

    // Paths against BFS and reversal.
    std::vector<NodeId> members = tree.Members();
    for (int k = 0; k < 20; ++k) {
      const NodeId& a = members[rng() % members.size()];
      const NodeId& b = members[rng() % members.size()];
      std::vector<NodeId> p = TreePath(tree, a, b);
      EXPECT_EQ(p, testing::BfsTreePath(tree, a, b));
      std::vector<NodeId> q = TreePath(tree, b, a);
      std::reverse(q.begin(), q.end());
      EXPECT_EQ(p, q);
    }
  }
}

}  // namespace
}  // namespace mstpath
