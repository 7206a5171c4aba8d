#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace hetfair {

using NodeId = std::uint32_t;

/// Unordered node pair. Graph::edges() always reports u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Counters collected while building a simple graph from raw pairs.
struct LoadReport {
  std::size_t lines = 0;           ///< non-comment, non-blank lines
  std::size_t self_loops = 0;      ///< dropped (u, u) pairs
  std::size_t duplicate_edges = 0; ///< repeated or reversed pairs collapsed
};

/// Immutable simple undirected graph with dense node ids 0..n-1.
///
/// Neighbor lists are kept sorted, so adjacency tests are logarithmic in the
/// degree and two graphs with the same edge set compare equal.
class Graph {
 public:
  Graph() = default;

  /// Builds a simple graph. Self-loops and duplicate pairs are dropped and
  /// counted in `report` when given. Throws hetfair::Error for ids >= node_count.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges,
                          LoadReport* report = nullptr);

  /// Takes ownership of an adjacency list. The list must already describe a
  /// simple symmetric graph; this is validated.
  static Graph from_adjacency(std::vector<std::vector<NodeId>> adjacency);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::size_t degree(NodeId node) const { return adjacency_.at(node).size(); }
  std::span<const NodeId> neighbors(NodeId node) const { return adjacency_.at(node); }
  bool has_edge(NodeId u, NodeId v) const;

  /// All edges with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  /// Same edge set over `node_count` nodes (the extra nodes are isolated).
  Graph padded(std::size_t node_count) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

struct LoadedGraph {
  Graph graph;
  LoadReport report;
};

/// Parses `src dst` pairs (whitespace or comma separated), one per line.
/// Text after a '#' and blank lines are skipped.
LoadedGraph parse_edge_list(std::istream& in, bool one_indexed,
                            std::string_view source = "<stream>");
LoadedGraph load_edge_list(const std::filesystem::path& path, bool one_indexed = false);

/// Sorted `u v` lines with u < v and LF endings.
void write_edge_list(const Graph& graph, std::ostream& out);
void save_edge_list(const Graph& graph, const std::filesystem::path& path);

}  // namespace hetfair
