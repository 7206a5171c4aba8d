#include "hetfair/rewire.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hetfair/error.hpp"
#include "seeding.hpp"

namespace hetfair {
namespace {

constexpr double kEps = 1e-12;

int sign_of(double x) { return x > kEps ? 1 : (x < -kEps ? -1 : 0); }

/// Mutable working copy of a labelled graph with per-node homophily targets.
class RewireState {
 public:
  RewireState(const Graph& g, const NodeTable& t, std::span<const NodeGoal> goals)
      : labels_(t.labels()),
        adjacency_(g.node_count()),
        same_(g.node_count(), 0),
        goal_(g.node_count(), std::numeric_limits<double>::quiet_NaN()),
        active_(g.node_count(), false) {
    if (t.size() != g.node_count()) throw Error("node table size does not match graph");
    for (NodeId u = 0; u < g.node_count(); ++u) {
      auto nb = g.neighbors(u);
      adjacency_[u].assign(nb.begin(), nb.end());
      if (!nb.empty() && labels_[u] == kInvalid) {
        throw Error("node " + std::to_string(u) + " has an edge but no class label");
      }
      for (NodeId v : nb) same_[u] += labels_[v] == labels_[u] ? 1 : 0;
    }
    std::size_t class_count = t.class_count();
    pools_.resize(class_count);
    for (const NodeGoal& goal : goals) {
      if (goal.node >= g.node_count()) throw Error("goal references a node outside the graph");
      if (!(goal.h_goal >= 0.0 && goal.h_goal <= 1.0)) throw Error("goal ratio outside [0, 1]");
      goal_[goal.node] = goal.h_goal;
      if (goal.direction != 0 && degree(goal.node) > 0) {
        active_[goal.node] = true;
        pools_[static_cast<std::size_t>(labels_[goal.node])].push_back(goal.node);
      }
    }
    for (auto& pool : pools_) std::sort(pool.begin(), pool.end());
  }

  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  bool active(NodeId v) const { return active_[v]; }

  double ratio(std::size_t same, std::size_t degree) const {
    return static_cast<double>(same) / static_cast<double>(degree);
  }
  double h(NodeId v) const { return ratio(same_[v], degree(v)); }
  double gap(NodeId v, double h_value) const { return std::abs(h_value - goal_[v]); }
  int direction(NodeId v) const { return sign_of(goal_[v] - h(v)); }

  bool adjacent(NodeId u, NodeId v) const {
    return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
  }

  std::vector<NodeId> active_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < active_.size(); ++v) {
      if (active_[v]) out.push_back(v);
    }
    return out;
  }

  /// Neighbor whose link to `v` is dropped: the link type opposes v's
  /// direction and the neighbor strictly moves toward its own goal.
  std::optional<NodeId> pick_neighbor(NodeId v, int dir) const {
    const bool want_homophilous_link = dir < 0;
    std::optional<NodeId> best;
    double best_gap = 0.0;
    for (NodeId j : adjacency_[v]) {
      const bool homophilous = labels_[j] == labels_[v];
      if (homophilous != want_homophilous_link || !active_[j] || degree(j) < 2) continue;
      const double before = gap(j, h(j));
      const double after = gap(j, ratio(same_[j] - (homophilous ? 1 : 0), degree(j) - 1));
      if (after < before - kEps && (!best || after < best_gap)) {
        best = j;
        best_gap = after;
      }
    }
    return best;
  }

  /// Non-neighbor of `v` to link so that v moves in `dir`; the candidate must
  /// strictly move toward its own goal and have spare capacity.
  template <typename HasCapacity>
  std::optional<NodeId> pick_candidate(NodeId v, int dir, HasCapacity&& has_capacity) const {
    const bool homophilous = dir > 0;
    std::optional<NodeId> best;
    double best_gap = 0.0;
    auto consider = [&](NodeId k) {
      if (k == v || degree(k) == 0 || adjacent(v, k) || !has_capacity(k)) return;
      const double before = gap(k, h(k));
      const double after = gap(k, ratio(same_[k] + (homophilous ? 1 : 0), degree(k) + 1));
      if (after < before - kEps && (!best || after < best_gap || (after == best_gap && k < *best))) {
        best = k;
        best_gap = after;
      }
    };
    const auto own = static_cast<std::size_t>(labels_[v]);
    for (std::size_t label = 0; label < pools_.size(); ++label) {
      if ((label == own) != homophilous) continue;
      for (NodeId k : pools_[label]) consider(k);
    }
    return best;
  }

  void add_edge(NodeId u, NodeId v) {
    insert_sorted(adjacency_[u], v);
    insert_sorted(adjacency_[v], u);
    if (labels_[u] == labels_[v]) {
      ++same_[u];
      ++same_[v];
    }
  }

  void remove_edge(NodeId u, NodeId v) {
    erase_sorted(adjacency_[u], v);
    erase_sorted(adjacency_[v], u);
    if (labels_[u] == labels_[v]) {
      --same_[u];
      --same_[v];
    }
  }

  std::size_t same(NodeId v) const { return same_[v]; }
  double goal(NodeId v) const { return goal_[v]; }

  Graph to_graph() const { return Graph::from_adjacency(adjacency_); }

 private:
  static void insert_sorted(std::vector<NodeId>& list, NodeId v) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
  }
  static void erase_sorted(std::vector<NodeId>& list, NodeId v) {
    list.erase(std::lower_bound(list.begin(), list.end(), v));
  }

  std::span<const ClassId> labels_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::size_t> same_;
  std::vector<double> goal_;
  std::vector<bool> active_;
  std::vector<std::vector<NodeId>> pools_;
};

}  // namespace

PhaseResult rewire_phase(const Graph& g, const NodeTable& t, std::span<const NodeGoal> goals,
                         std::uint64_t seed) {
  RewireState state(g, t, goals);
  EditLog log;
  log.header.seed = seed;

  std::vector<NodeId> sources = state.active_nodes();
  std::mt19937_64 rng(seed);
  std::shuffle(sources.begin(), sources.end(), rng);

  const auto any_capacity = [](NodeId) { return true; };
  for (NodeId v : sources) {
    if (state.direction(v) == 0) continue;
    const std::size_t budget = edge_move_bounds(state.h(v), state.goal(v), state.degree(v)).lower;
    for (std::size_t move = 0; move < budget; ++move) {
      const int dir = state.direction(v);
      const std::size_t d = state.degree(v);
      const std::size_t s = state.same(v);
      if (dir == 0 || d < 2) break;
      // dir > 0 trades a heterophilous link for a homophilous one, dir < 0 the reverse.
      if ((dir > 0 && s == d) || (dir < 0 && s == 0)) break;
      const std::size_t s_removed = dir > 0 ? s : s - 1;
      const std::size_t s_added = dir > 0 ? s_removed + 1 : s_removed;
      const double before = state.gap(v, state.h(v));
      const double removed = state.gap(v, state.ratio(s_removed, d - 1));
      const double added = state.gap(v, state.ratio(s_added, d));
      if (removed > before + kEps || added > removed + kEps || !(added < before - kEps)) break;

      const auto j = state.pick_neighbor(v, dir);
      if (!j) break;
      const auto k = state.pick_candidate(v, dir, any_capacity);
      if (!k) break;
      state.remove_edge(v, *j);
      log.push(EditPhase::kRewire, EditOp::kRemove, v, *j);
      state.add_edge(v, *k);
      log.push(EditPhase::kRewire, EditOp::kAdd, v, *k);
    }
  }
  return {state.to_graph(), std::move(log)};
}

PhaseResult refine_phase(const Graph& g, const NodeTable& t, std::span<const NodeGoal> goals,
                         std::uint64_t seed) {
  RewireState state(g, t, goals);
  EditLog log;
  log.header.seed = seed;

  std::vector<NodeId> order = state.active_nodes();
  std::vector<std::size_t> cap(g.node_count(), 0);
  std::vector<std::size_t> added(g.node_count(), 0);
  for (NodeId v : order) {
    cap[v] = edge_move_bounds(state.h(v), state.goal(v), state.degree(v)).upper;
  }
  const auto has_capacity = [&](NodeId k) { return added[k] < cap[k]; };

  std::mt19937_64 rng(seed);
  bool changed = true;
  while (changed) {
    changed = false;
    std::shuffle(order.begin(), order.end(), rng);
    for (NodeId v : order) {
      while (added[v] < cap[v]) {
        const int dir = state.direction(v);
        if (dir == 0) break;
        const std::size_t d = state.degree(v);
        const std::size_t s = state.same(v);
        const double after = state.gap(v, state.ratio(dir > 0 ? s + 1 : s, d + 1));
        if (!(after < state.gap(v, state.h(v)) - kEps)) break;
        const auto k = state.pick_candidate(v, dir, has_capacity);
        if (!k) break;
        state.add_edge(v, *k);
        log.push(EditPhase::kRefine, EditOp::kAdd, v, *k);
        ++added[v];
        ++added[*k];
        changed = true;
      }
    }
  }
  return {state.to_graph(), std::move(log)};
}

double goal_potential(const Graph& g, const NodeTable& t, std::span<const NodeGoal> goals) {
  double total = 0.0;
  for (const NodeGoal& goal : goals) {
    if (g.degree(goal.node) == 0) continue;
    total += std::abs(local_homophily(g, t, goal.node) - goal.h_goal);
  }
  return total;
}

GenerationResult generate(const Graph& g, const NodeTable& t, const BetaGoal& goal,
                          std::size_t bins, std::uint64_t seed) {
  const auto ratios = local_homophily_all(g, t);
  GenerationResult out;
  out.original = histogram(ratios, bins);
  out.goal = beta_goal_histogram(goal, bins);
  const TransportPlan plan = transport_plan(out.original, out.goal);
  const auto goals = assign_node_goals(plan, ratios, detail::derive_seed(seed, 0));

  PhaseResult rewired = rewire_phase(g, t, goals, detail::derive_seed(seed, 1));
  PhaseResult refined = refine_phase(rewired.graph, t, goals, detail::derive_seed(seed, 2));

  out.log.header = {seed, goal.alpha, goal.beta, bins};
  out.log.append(rewired.log);
  out.log.append(refined.log);
  out.graph = std::move(refined.graph);
  out.generated = histogram(local_homophily_all(out.graph, t), bins);

  GenerationReport& report = out.report;
  report.emd_original_goal = emd(out.original, out.goal);
  report.emd_generated_goal = emd(out.generated, out.goal);
  report.nodes_targeted = static_cast<std::size_t>(
      std::count_if(goals.begin(), goals.end(), [](const NodeGoal& n) { return n.direction != 0; }));
  if (report.emd_generated_goal > report.emd_original_goal) {
    report.reverted = true;
    out.graph = g;
    out.generated = out.original;
    out.log = EditLog{};
    out.log.header = {seed, goal.alpha, goal.beta, bins};
    report.emd_generated_goal = report.emd_original_goal;
  }
  report.edits_rewire = out.log.count(EditPhase::kRewire);
  report.edits_refine = out.log.count(EditPhase::kRefine);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const long delta = static_cast<long>(out.graph.degree(v)) - static_cast<long>(g.degree(v));
    ++report.degree_delta_histogram[delta];
  }
  return out;
}

}  // namespace hetfair
