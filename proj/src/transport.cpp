#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "hetfair/error.hpp"
#include "hetfair/rewire.hpp"

namespace hetfair {

double TransportPlan::row_sum(std::size_t from) const {
  double s = 0.0;
  for (std::size_t j = 0; j < bins_; ++j) s += at(from, j);
  return s;
}

double TransportPlan::column_sum(std::size_t to) const {
  double s = 0.0;
  for (std::size_t i = 0; i < bins_; ++i) s += at(i, to);
  return s;
}

double TransportPlan::moved_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i < bins_; ++i) {
    for (std::size_t j = 0; j < bins_; ++j) {
      if (i != j) s += at(i, j);
    }
  }
  return s;
}

TransportPlan transport_plan(const Histogram& p, const Histogram& q) {
  if (p.bins() != q.bins()) {
    throw Error("transport_plan: bin counts differ (" + std::to_string(p.bins()) + " vs " +
                std::to_string(q.bins()) + ")");
  }
  const std::size_t b = p.bins();
  TransportPlan plan(b);
  std::size_t i = 0;
  std::size_t j = 0;
  double supply = p[0];
  double demand = q[0];
  while (i < b && j < b) {
    const double moved = std::min(supply, demand);
    plan.at(i, j) += moved;
    supply -= moved;
    demand -= moved;
    if (supply <= demand) {
      if (++i < b) supply = p[i];
    } else {
      if (++j < b) demand = q[j];
    }
  }
  // Rounding can leave a sliver of supply once the demand side is exhausted.
  if (i < b) {
    plan.at(i, b - 1) += supply;
    for (++i; i < b; ++i) plan.at(i, b - 1) += p[i];
  }
  return plan;
}

std::vector<NodeGoal> assign_node_goals(const TransportPlan& plan,
                                        std::span<const std::optional<double>> ratios,
                                        std::uint64_t seed) {
  const std::size_t b = plan.bins();
  if (b == 0) throw Error("assign_node_goals: empty plan");
  std::vector<std::vector<NodeId>> members(b);
  for (NodeId v = 0; v < ratios.size(); ++v) {
    if (ratios[v]) members[bin_index(*ratios[v], b)].push_back(v);
  }

  std::mt19937_64 rng(seed);
  std::vector<NodeGoal> goals;
  for (std::size_t i = 0; i < b; ++i) {
    const double row = plan.row_sum(i);
    auto& nodes = members[i];
    if (nodes.empty()) {
      if (row > 1e-12) {
        throw Error("assign_node_goals: plan moves mass out of empty bin " + std::to_string(i));
      }
      continue;
    }
    if (!(row > 0.0)) {
      throw Error("assign_node_goals: bin " + std::to_string(i) + " has nodes but no plan mass");
    }
    std::shuffle(nodes.begin(), nodes.end(), rng);

    // Largest-remainder apportionment of the bin's nodes over the row.
    const double n = static_cast<double>(nodes.size());
    std::vector<std::size_t> counts(b);
    std::vector<double> remainder(b);
    std::size_t assigned = 0;
    for (std::size_t j = 0; j < b; ++j) {
      const double quota = plan.at(i, j) / row * n;
      counts[j] = static_cast<std::size_t>(std::floor(quota));
      remainder[j] = quota - static_cast<double>(counts[j]);
      assigned += counts[j];
    }
    std::vector<std::size_t> order(b);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return remainder[x] > remainder[y]; });
    for (std::size_t r = 0; assigned < nodes.size(); ++r, ++assigned) ++counts[order[r % b]];

    std::size_t cursor = 0;
    for (std::size_t j = 0; j < b; ++j) {
      for (std::size_t c = 0; c < counts[j]; ++c, ++cursor) {
        const NodeId v = nodes[cursor];
        NodeGoal goal{v, *ratios[v], bin_center(j, b), 0};
        if (j != i) goal.direction = goal.h_goal > goal.h_current ? 1 : (goal.h_goal < goal.h_current ? -1 : 0);
        goals.push_back(goal);
      }
    }
  }
  std::sort(goals.begin(), goals.end(), [](const NodeGoal& a, const NodeGoal& b) { return a.node < b.node; });
  return goals;
}

EdgeMoveBounds edge_move_bounds(double h_current, double h_goal, std::size_t degree) {
  if (degree == 0) throw Error("edge_move_bounds: degree must be positive");
  if (!(h_current >= 0.0 && h_current <= 1.0 && h_goal >= 0.0 && h_goal <= 1.0)) {
    throw Error("edge_move_bounds: ratios must lie in [0, 1]");
  }
  // Slack keeps values like 0.3 * 10 = 3.0000000000000004 from rounding up.
  constexpr double kSlack = 1e-9;
  auto ceil_count = [](double x) { return static_cast<std::size_t>(std::ceil(x - kSlack)); };
  const double gap = std::abs(h_goal - h_current);
  const double d = static_cast<double>(degree);
  if (gap == 0.0) return {0, 0};
  EdgeMoveBounds bounds;
  bounds.lower = ceil_count(gap * d);
  if (h_current < h_goal) {
    bounds.upper = h_goal < 1.0 ? ceil_count(gap * d / (1.0 - h_goal)) : bounds.lower;
  } else {
    bounds.upper = h_goal > 0.0 ? ceil_count(gap * d / h_goal) : bounds.lower;
  }
  bounds.upper = std::max(bounds.upper, bounds.lower);
  return bounds;
}

}  // namespace hetfair
