#include <gtest/gtest.h>

#include <set>

#include "hetfair/edit_log.hpp"
#include "hetfair/error.hpp"
#include "hetfair/rewire.hpp"
#include "hetfair/synthetic.hpp"
#include "oracles.hpp"

using namespace hetfair;

namespace {

/// Goals for every non-isolated node: listed nodes get the given target,
/// everything else is frozen at its current ratio.
std::vector<NodeGoal> goals_for(const Graph& g, const NodeTable& t, const std::map<NodeId, double>& targets) {
  std::vector<NodeGoal> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) == 0) continue;
    const double h = local_homophily(g, t, v);
    const auto it = targets.find(v);
    const double goal = it == targets.end() ? h : it->second;
    out.push_back({v, h, goal, goal > h ? 1 : (goal < h ? -1 : 0)});
  }
  return out;
}

/// Node 0 (class 0, degree 4, h = 0.25) wants h = 0.75. Neighbors 2 and 3
/// (class 1) want to shed their class-0 link; 5 and 6 (class 0) want another
/// class-0 link. Nodes 1, 4, 7, 8, 9 are frozen.
struct RewireFixture {
  Graph graph = Graph::from_edges(10, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {2, 3}, {4, 9},
                                                        {1, 5}, {1, 6}, {5, 7}, {6, 8}});
  NodeTable table{{0, 0, 1, 1, 1, 0, 0, 1, 1, 1}, std::vector<ClassId>(10, 0)};
  std::vector<NodeGoal> goals = goals_for(graph, table, {{0, 0.75}, {2, 1.0}, {3, 1.0}, {5, 1.0}, {6, 1.0}});
};

}  // namespace

TEST(RewirePhase, FrozenGoalsLeaveGraphUnchanged) {
  const RewireFixture f;
  const auto frozen = goals_for(f.graph, f.table, {});
  const PhaseResult r = rewire_phase(f.graph, f.table, frozen, 1);
  EXPECT_EQ(r.graph, f.graph);
  EXPECT_TRUE(r.log.empty());
}

TEST(RewirePhase, HandFixtureReachesGoalWithTwoPairs) {
  const RewireFixture f;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PhaseResult r = rewire_phase(f.graph, f.table, f.goals, seed);
    EXPECT_EQ(r.graph.degree(0), 4u);
    EXPECT_DOUBLE_EQ(local_homophily(r.graph, f.table, 0), 0.75);
    ASSERT_EQ(r.log.size(), 4u) << "seed " << seed;
    for (std::size_t i = 0; i < 4; i += 2) {
      EXPECT_EQ(r.log.records()[i].op, EditOp::kRemove);
      EXPECT_EQ(r.log.records()[i + 1].op, EditOp::kAdd);
      EXPECT_EQ(r.log.records()[i].u, 0u);
      EXPECT_EQ(r.log.records()[i + 1].u, 0u);
    }
    EXPECT_TRUE(r.graph.has_edge(0, 5));
    EXPECT_TRUE(r.graph.has_edge(0, 6));
    EXPECT_FALSE(r.graph.has_edge(0, 2));
    EXPECT_FALSE(r.graph.has_edge(0, 3));
    EXPECT_EQ(r.graph.edge_count(), f.graph.edge_count());
    EXPECT_EQ(replay(f.graph, r.log), r.graph);
  }
}

TEST(RewirePhase, InvariantsOnPlantedPartition) {
  const LabeledGraph sbm = planted_partition(400, 3, 8.0, 0.4, 21);
  const auto ratios = local_homophily_all(sbm.graph, sbm.table);
  const Histogram p = histogram(std::span<const std::optional<double>>(ratios), 10);
  const auto goals = assign_node_goals(transport_plan(p, beta_goal_histogram({10, 3}, 10)), ratios, 2);
  const PhaseResult r = rewire_phase(sbm.graph, sbm.table, goals, 3);
  ASSERT_FALSE(r.log.empty());
  EXPECT_EQ(r.graph.edge_count(), sbm.graph.edge_count());
  EXPECT_LT(goal_potential(r.graph, sbm.table, goals), goal_potential(sbm.graph, sbm.table, goals));

  // Any node's degree moves by at most the number of times it was a partner.
  std::map<NodeId, long> partner_uses;
  for (const auto& rec : r.log.records()) ++partner_uses[rec.v];
  for (NodeId v = 0; v < sbm.graph.node_count(); ++v) {
    const long delta = static_cast<long>(r.graph.degree(v)) - static_cast<long>(sbm.graph.degree(v));
    EXPECT_LE(std::abs(delta), partner_uses[v]);
  }
  // Frozen nodes are never touched.
  std::set<NodeId> frozen;
  for (const auto& g : goals) {
    if (g.direction == 0) frozen.insert(g.node);
  }
  for (const auto& rec : r.log.records()) {
    EXPECT_FALSE(frozen.count(rec.u));
    EXPECT_FALSE(frozen.count(rec.v));
  }
  EXPECT_EQ(hetfair::testing::edge_hash(replay(sbm.graph, r.log)), hetfair::testing::edge_hash(r.graph));
}

TEST(RefinePhase, OnTargetNodesMakeNoEdits) {
  const RewireFixture f;
  const PhaseResult r = refine_phase(f.graph, f.table, goals_for(f.graph, f.table, {}), 4);
  EXPECT_TRUE(r.log.empty());
}

TEST(RefinePhase, SixNodeFixtureAddsOneEdge) {
  // 0 (class 0) and 1 (class 1) are fully homophilous and both want h = 0.5.
  const Graph g = Graph::from_edges(6, std::vector<Edge>{{0, 2}, {1, 3}, {2, 4}, {3, 5}});
  const NodeTable t({0, 1, 0, 1, 0, 1}, std::vector<ClassId>(6, 0));
  const auto goals = goals_for(g, t, {{0, 0.5}, {1, 0.5}});
  const PhaseResult r = refine_phase(g, t, goals, 5);
  ASSERT_EQ(r.log.size(), 1u);
  EXPECT_EQ(r.log.records()[0].op, EditOp::kAdd);
  EXPECT_EQ(r.log.records()[0].phase, EditPhase::kRefine);
  EXPECT_TRUE(r.graph.has_edge(0, 1));
  EXPECT_DOUBLE_EQ(local_homophily(r.graph, t, 0), 0.5);
  EXPECT_DOUBLE_EQ(local_homophily(r.graph, t, 1), 0.5);
}

TEST(RefinePhase, RespectsUpperBoundsAndStaysSimple) {
  const LabeledGraph sbm = planted_partition(300, 2, 6.0, 0.5, 22);
  const auto ratios = local_homophily_all(sbm.graph, sbm.table);
  const Histogram p = histogram(std::span<const std::optional<double>>(ratios), 10);
  const auto goals = assign_node_goals(transport_plan(p, beta_goal_histogram({3, 10}, 10)), ratios, 6);
  const PhaseResult r = refine_phase(sbm.graph, sbm.table, goals, 7);
  std::map<NodeId, std::size_t> adds;
  for (const auto& rec : r.log.records()) {
    EXPECT_EQ(rec.op, EditOp::kAdd);
    EXPECT_NE(rec.u, rec.v);
    ++adds[rec.u];
    ++adds[rec.v];
  }
  for (const auto& g : goals) {
    if (g.direction == 0) {
      EXPECT_EQ(adds[g.node], 0u);
      continue;
    }
    EXPECT_LE(adds[g.node], edge_move_bounds(g.h_current, g.h_goal, sbm.graph.degree(g.node)).upper);
  }
  EXPECT_EQ(replay(sbm.graph, r.log), r.graph);  // replay throws on duplicate adds
}

TEST(Generate, ReducesEmdAndIsDeterministic) {
  const LabeledGraph sbm = planted_partition(500, 2, 8.0, 0.5, 23);
  const auto a = generate(sbm.graph, sbm.table, {10, 3}, 10, 99);
  const auto b = generate(sbm.graph, sbm.table, {10, 3}, 10, 99);
  EXPECT_LE(a.report.emd_generated_goal, a.report.emd_original_goal);
  EXPECT_LE(a.report.emd_generated_goal, 0.5 * a.report.emd_original_goal);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.log, b.log);
  EXPECT_EQ(a.log.count(EditPhase::kRewire), a.report.edits_rewire);
  EXPECT_EQ(a.log.count(EditPhase::kRefine), a.report.edits_refine);
  EXPECT_EQ(replay(sbm.graph, a.log), a.graph);
  EXPECT_NEAR(emd(a.generated, a.goal), a.report.emd_generated_goal, 1e-15);
  std::size_t total = 0;
  for (const auto& [delta, count] : a.report.degree_delta_histogram) total += count;
  EXPECT_EQ(total, sbm.graph.node_count());
}

TEST(Generate, IdentityPlanMakesNoEdits) {
  const LabeledGraph sbm = planted_partition(600, 2, 12.0, 0.5, 24);
  const auto ratios = local_homophily_all(sbm.graph, sbm.table);
  const Histogram p = histogram(std::span<const std::optional<double>>(ratios), 10);
  const auto plan = transport_plan(p, p);
  const auto goals = assign_node_goals(plan, ratios, 1);
  const PhaseResult r = rewire_phase(sbm.graph, sbm.table, goals, 1);
  EXPECT_TRUE(r.log.empty());
}

TEST(Generate, NeverWorsensEmd) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const LabeledGraph sbm = planted_partition(200, 2, 4.0, 0.8, seed);
    for (const BetaGoal goal : {BetaGoal{1, 1}, BetaGoal{3, 10}, BetaGoal{50, 50}}) {
      const auto r = generate(sbm.graph, sbm.table, goal, 10, seed);
      EXPECT_LE(r.report.emd_generated_goal, r.report.emd_original_goal + 1e-15);
    }
  }
}
