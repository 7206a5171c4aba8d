#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "hetfair/graph.hpp"
#include "hetfair/node_table.hpp"

namespace hetfair {

/// A node-induced subgraph with compacted ids. original_ids[new] = old.
struct Subgraph {
  Graph graph;
  NodeTable table;
  std::vector<NodeId> original_ids;
};

/// Subgraph induced on `keep` (ascending, unique), relabelled 0..|keep|-1.
Subgraph induced_subgraph(const Graph& g, const NodeTable& t, std::span<const NodeId> keep);

/// Component id per node, numbered in order of each component's smallest node.
std::vector<std::size_t> connected_components(const Graph& g);

/// Largest connected component. Size ties go to the component holding the
/// smallest node id.
Subgraph largest_connected_component(const Graph& g, const NodeTable& t);

/// Keeps nodes whose label is among the k most frequent non-excluded labels
/// and whose sensitive attribute is valid, then takes the largest connected
/// component. Labels are renumbered by descending frequency (ties: lower
/// original id first); sensitive ids are renumbered densely in ascending order.
Subgraph filter_top_classes(const Graph& g, const NodeTable& t, std::size_t k,
                            const std::set<ClassId>& exclude = {});

}  // namespace hetfair
