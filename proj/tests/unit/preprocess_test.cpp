#include <gtest/gtest.h>

#include <numeric>
#include <queue>
#include <random>

#include "hetfair/error.hpp"
#include "hetfair/preprocess.hpp"

using namespace hetfair;

namespace {

Graph graph(std::size_t n, std::vector<Edge> edges) { return Graph::from_edges(n, edges); }

NodeTable uniform_table(std::size_t n) { return NodeTable(std::vector<ClassId>(n, 0), std::vector<ClassId>(n, 0)); }

std::size_t reachable_from_zero(const Graph& g) {
  std::vector<bool> seen(g.node_count(), false);
  std::queue<NodeId> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 0;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    ++count;
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        q.push(v);
      }
    }
  }
  return count;
}

}  // namespace

TEST(LargestComponent, ConnectedGraphIsUnchanged) {
  const Graph g = graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto sub = largest_connected_component(g, uniform_table(4));
  EXPECT_EQ(sub.graph, g);
  EXPECT_EQ(sub.original_ids, (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(LargestComponent, PicksTheLargerComponent) {
  const Graph g = graph(5, {{0, 1}, {2, 3}, {3, 4}});
  const auto sub = largest_connected_component(g, uniform_table(5));
  EXPECT_EQ(sub.original_ids, (std::vector<NodeId>{2, 3, 4}));
  EXPECT_EQ(sub.graph.edge_count(), 2u);
}

TEST(LargestComponent, TieGoesToSmallestNodeId) {
  const Graph g = graph(6, {{3, 4}, {4, 5}, {0, 1}, {1, 2}});
  const auto sub = largest_connected_component(g, uniform_table(6));
  EXPECT_EQ(sub.original_ids, (std::vector<NodeId>{0, 1, 2}));
}

TEST(LargestComponent, EmptyGraphIsAnError) {
  EXPECT_THROW(largest_connected_component(Graph{}, NodeTable{}), Error);
}

TEST(LargestComponent, ReachabilityOnRandomGraphs) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<NodeId> node(0, 59);
    std::vector<Edge> edges;
    for (int i = 0; i < 50; ++i) edges.push_back({node(rng), node(rng)});
    const Graph g = Graph::from_edges(60, edges);
    const auto labels = connected_components(g);
    std::vector<std::size_t> sizes(60, 0);
    for (auto c : labels) ++sizes[c];
    const auto sub = largest_connected_component(g, uniform_table(60));
    EXPECT_EQ(sub.graph.node_count(), *std::max_element(sizes.begin(), sizes.end()));
    EXPECT_EQ(reachable_from_zero(sub.graph), sub.graph.node_count());
  }
}

TEST(FilterTopClasses, RemapsByFrequency) {
  // classes 2 (5 nodes), 0 (3 nodes), 1 (1 node) on a path
  const std::vector<ClassId> labels = {2, 0, 2, 2, 1, 0, 2, 0, 2};
  const std::vector<ClassId> sens = {0, 1, 0, 1, 0, 1, 0, 1, 0};
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < 9; ++i) edges.push_back({i, i + 1});
  const Graph g = Graph::from_edges(9, edges);
  const auto sub = filter_top_classes(g, NodeTable(labels, sens), 2);
  // node 4 (class 1) drops out and splits the path; the left part {0..3} wins.
  EXPECT_EQ(sub.original_ids, (std::vector<NodeId>{0, 1, 2, 3}));
  EXPECT_EQ(sub.table.label(0), 0);  // most frequent class becomes 0
  EXPECT_EQ(sub.table.label(1), 1);

  // Without the LCC split, 8 candidate nodes survive.
  std::vector<Edge> star;
  for (NodeId i = 1; i < 9; ++i) star.push_back({0, i});
  star.push_back({1, 5});
  star.push_back({5, 7});
  star.push_back({3, 2});
  star.push_back({2, 6});
  star.push_back({6, 8});
  star.push_back({8, 0});
  const auto all = filter_top_classes(Graph::from_edges(9, star), NodeTable(labels, sens), 2);
  EXPECT_EQ(all.graph.node_count(), 8u);
}

TEST(FilterTopClasses, TiesPreferLowerClassId) {
  const std::vector<ClassId> labels = {1, 0, 1, 0};
  const Graph g = graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto sub = filter_top_classes(g, NodeTable(labels, {0, 1, 0, 1}), 2);
  EXPECT_EQ(sub.table.label(1), 0);
  EXPECT_EQ(sub.table.label(0), 1);
}

TEST(FilterTopClasses, DropsInvalidAndExcluded) {
  const std::vector<ClassId> labels = {0, 0, 1, 2, 1, 0};
  const std::vector<ClassId> sens = {0, kInvalid, 1, 0, 1, 0};
  const Graph g = graph(6, {{0, 2}, {2, 4}, {4, 5}, {5, 3}, {1, 0}});
  const auto sub = filter_top_classes(g, NodeTable(labels, sens), 2, {2});
  for (NodeId v = 0; v < sub.table.size(); ++v) {
    EXPECT_NE(sub.table.sensitive(v), kInvalid);
    EXPECT_NE(sub.original_ids[v], 3u);
    EXPECT_NE(sub.original_ids[v], 1u);
  }
  EXPECT_THROW(filter_top_classes(g, NodeTable(labels, sens), 3, {2}), Error);
}

TEST(FilterTopClasses, KEqualsClassCountGivesLcc) {
  const Graph g = graph(5, {{0, 1}, {1, 2}, {3, 4}});
  const NodeTable t({0, 1, 0, 1, 0}, {0, 1, 0, 1, 0});
  const auto a = filter_top_classes(g, t, 2);
  const auto b = largest_connected_component(g, t);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.original_ids, b.original_ids);
}
