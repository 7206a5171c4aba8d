#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hetfair/edit_log.hpp"
#include "hetfair/graph.hpp"
#include "hetfair/homophily.hpp"
#include "hetfair/node_table.hpp"

namespace hetfair {

/// b x b mass-transport matrix between homophily bins. Row i says where the
/// mass of source bin i goes.
class TransportPlan {
 public:
  explicit TransportPlan(std::size_t bins = 0) : bins_(bins), cells_(bins * bins, 0.0) {}

  std::size_t bins() const noexcept { return bins_; }
  double& at(std::size_t from, std::size_t to) { return cells_.at(from * bins_ + to); }
  double at(std::size_t from, std::size_t to) const { return cells_.at(from * bins_ + to); }

  double row_sum(std::size_t from) const;
  double column_sum(std::size_t to) const;
  /// Total mass that leaves its source bin.
  double moved_mass() const;

 private:
  std::size_t bins_;
  std::vector<double> cells_;
};

/// Optimal plan for ground cost |center_i - center_j|: the monotone
/// (north-west corner) coupling, exact for convex costs in one dimension.
TransportPlan transport_plan(const Histogram& p, const Histogram& q);

/// Target assigned to one node. direction is sign(h_goal - h_current), and 0
/// for nodes that keep their bin (those are never edited).
struct NodeGoal {
  NodeId node = 0;
  double h_current = 0.0;
  double h_goal = 0.0;
  int direction = 0;
};

/// Splits each source bin's nodes (seeded shuffle) over target bins in
/// proportion to the plan row, using largest-remainder rounding. Nodes whose
/// ratio is std::nullopt get no goal. Result is ordered by node id.
std::vector<NodeGoal> assign_node_goals(const TransportPlan& plan,
                                        std::span<const std::optional<double>> ratios,
                                        std::uint64_t seed);

struct EdgeMoveBounds {
  std::size_t lower = 0;  ///< edits when purely rewiring (degree kept)
  std::size_t upper = 0;  ///< edits when only adding edges
};

/// Number of edge edits needed to move a degree-`degree` node from ratio
/// h_current to h_goal. Goals at exactly 0 or 1 are reachable by rewiring
/// only, so upper == lower there.
EdgeMoveBounds edge_move_bounds(double h_current, double h_goal, std::size_t degree);

struct PhaseResult {
  Graph graph;
  EditLog log;
};

/// Degree-preserving phase. Every source node (seeded order) performs up to
/// its lower bound of paired edits: drop an incident edge to a neighbor that
/// wants to move the same way, then link a non-neighbor candidate that also
/// benefits. An edit is applied only when every touched node ends no further
/// from its goal and the sum of |h - h_goal| strictly drops; nodes with
/// direction 0 are never touched.
PhaseResult rewire_phase(const Graph& g, const NodeTable& t, std::span<const NodeGoal> goals,
                         std::uint64_t seed);

/// Edge-addition phase. Links mutually benefitting non-adjacent pairs until
/// no such pair exists or every node is on target. Each node accepts at most
/// its upper bound of additions, computed from its state when the phase starts.
PhaseResult refine_phase(const Graph& g, const NodeTable& t, std::span<const NodeGoal> goals,
                         std::uint64_t seed);

/// Sum of |h_v - h_goal_v| over goal nodes whose ratio is defined in `g`.
double goal_potential(const Graph& g, const NodeTable& t, std::span<const NodeGoal> goals);

struct GenerationReport {
  double emd_original_goal = 0.0;
  double emd_generated_goal = 0.0;
  std::size_t edits_rewire = 0;
  std::size_t edits_refine = 0;
  std::size_t nodes_targeted = 0;
  /// degree(generated) - degree(original) -> node count
  std::map<long, std::size_t> degree_delta_histogram;
  /// True when the edited graph ended further from the goal than the input
  /// and the input was returned unchanged instead.
  bool reverted = false;
};

struct GenerationResult {
  Graph graph;
  EditLog log;
  GenerationReport report;
  Histogram original;
  Histogram goal;
  Histogram generated;
};

/// Full pipeline: local ratios, histogram, Beta goal, transport plan, goal
/// assignment, rewire phase, refine phase.
GenerationResult generate(const Graph& g, const NodeTable& t, const BetaGoal& goal,
                          std::size_t bins, std::uint64_t seed);

}  // namespace hetfair
