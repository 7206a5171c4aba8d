#include "hetfair/preprocess.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

#include "hetfair/error.hpp"

namespace hetfair {

Subgraph induced_subgraph(const Graph& g, const NodeTable& t, std::span<const NodeId> keep) {
  if (t.size() != g.node_count()) throw Error("node table size does not match graph");
  constexpr NodeId kDropped = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> remap(g.node_count(), kDropped);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (i > 0 && keep[i] <= keep[i - 1]) throw Error("induced_subgraph expects ascending unique ids");
    remap.at(keep[i]) = static_cast<NodeId>(i);
  }
  std::vector<std::vector<NodeId>> adjacency(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (NodeId v : g.neighbors(keep[i])) {
      if (remap[v] != kDropped) adjacency[i].push_back(remap[v]);
    }
  }
  Subgraph out;
  out.graph = Graph::from_adjacency(std::move(adjacency));
  out.table = t.subset(keep);
  out.original_ids.assign(keep.begin(), keep.end());
  return out;
}

std::vector<std::size_t> connected_components(const Graph& g) {
  constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> component(g.node_count(), kUnseen);
  std::size_t next = 0;
  std::queue<NodeId> frontier;
  for (NodeId root = 0; root < g.node_count(); ++root) {
    if (component[root] != kUnseen) continue;
    component[root] = next;
    frontier.push(root);
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop();
      for (NodeId v : g.neighbors(u)) {
        if (component[v] == kUnseen) {
          component[v] = next;
          frontier.push(v);
        }
      }
    }
    ++next;
  }
  return component;
}

Subgraph largest_connected_component(const Graph& g, const NodeTable& t) {
  if (g.node_count() == 0) throw Error("largest_connected_component: empty graph");
  const auto component = connected_components(g);
  const std::size_t count = *std::max_element(component.begin(), component.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  for (std::size_t c : component) ++sizes[c];
  // Components are numbered by smallest member, so the first maximum wins ties.
  const std::size_t best = static_cast<std::size_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<NodeId> keep;
  keep.reserve(sizes[best]);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (component[v] == best) keep.push_back(v);
  }
  return induced_subgraph(g, t, keep);
}

Subgraph filter_top_classes(const Graph& g, const NodeTable& t, std::size_t k,
                            const std::set<ClassId>& exclude) {
  if (k == 0) throw Error("filter_top_classes: k must be positive");
  if (t.size() != g.node_count()) throw Error("node table size does not match graph");

  const auto counts = t.class_histogram();
  std::vector<ClassId> ranked;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0 && !exclude.contains(static_cast<ClassId>(c))) {
      ranked.push_back(static_cast<ClassId>(c));
    }
  }
  if (ranked.size() < k) {
    throw Error("filter_top_classes: only " + std::to_string(ranked.size()) +
                " classes remain, asked for " + std::to_string(k));
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](ClassId a, ClassId b) { return counts[a] > counts[b]; });
  ranked.resize(k);

  std::map<ClassId, ClassId> class_map;
  for (std::size_t i = 0; i < ranked.size(); ++i) class_map[ranked[i]] = static_cast<ClassId>(i);

  std::vector<NodeId> keep;
  std::set<ClassId> sensitive_values;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (t.sensitive(v) != kInvalid && class_map.contains(t.label(v))) {
      keep.push_back(v);
      sensitive_values.insert(t.sensitive(v));
    }
  }
  std::map<ClassId, ClassId> sensitive_map;
  for (ClassId s : sensitive_values) {
    sensitive_map.emplace(s, static_cast<ClassId>(sensitive_map.size()));
  }

  Subgraph candidates = induced_subgraph(g, t, keep);
  std::vector<ClassId> labels(keep.size());
  std::vector<ClassId> sensitive(keep.size());
  std::vector<double> features;
  for (NodeId i = 0; i < keep.size(); ++i) {
    labels[i] = class_map.at(candidates.table.label(i));
    sensitive[i] = sensitive_map.at(candidates.table.sensitive(i));
    auto f = candidates.table.features(i);
    features.insert(features.end(), f.begin(), f.end());
  }
  NodeTable relabelled(std::move(labels), std::move(sensitive), t.feature_dim(), std::move(features));

  if (candidates.graph.node_count() == 0) throw Error("filter_top_classes: no node survives the filter");
  Subgraph lcc = largest_connected_component(candidates.graph, relabelled);
  for (NodeId& id : lcc.original_ids) id = candidates.original_ids[id];
  return lcc;
}

}  // namespace hetfair
