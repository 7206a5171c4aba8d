#include "hetfair/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "hetfair/error.hpp"

namespace hetfair {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges, LoadReport* report) {
  std::vector<std::vector<NodeId>> adjacency(node_count);
  std::size_t self_loops = 0;
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw Error("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                  ") references a node outside 0.." + std::to_string(node_count));
    }
    if (e.u == e.v) {
      ++self_loops;
      continue;
    }
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
  }
  std::size_t half_edges = 0;
  for (auto& neighbors : adjacency) {
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
    half_edges += neighbors.size();
  }
  Graph g;
  g.adjacency_ = std::move(adjacency);
  g.edge_count_ = half_edges / 2;
  if (report != nullptr) {
    report->self_loops = self_loops;
    report->duplicate_edges = edges.size() - self_loops - g.edge_count_;
  }
  return g;
}

Graph Graph::from_adjacency(std::vector<std::vector<NodeId>> adjacency) {
  const std::size_t n = adjacency.size();
  std::size_t half_edges = 0;
  for (NodeId u = 0; u < n; ++u) {
    auto& neighbors = adjacency[u];
    if (!std::is_sorted(neighbors.begin(), neighbors.end())) {
      std::sort(neighbors.begin(), neighbors.end());
    }
    if (std::adjacent_find(neighbors.begin(), neighbors.end()) != neighbors.end()) {
      throw Error("adjacency of node " + std::to_string(u) + " has a duplicate neighbor");
    }
    half_edges += neighbors.size();
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : adjacency[u]) {
      if (v >= n || v == u || !std::binary_search(adjacency[v].begin(), adjacency[v].end(), u)) {
        throw Error("adjacency is not a simple symmetric graph at node " + std::to_string(u));
      }
    }
  }
  Graph g;
  g.adjacency_ = std::move(adjacency);
  g.edge_count_ = half_edges / 2;
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return false;
  const auto& a = adjacency_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

Graph Graph::padded(std::size_t node_count) const {
  if (node_count < this->node_count()) {
    throw Error("cannot pad a graph to fewer nodes than it has");
  }
  Graph g = *this;
  g.adjacency_.resize(node_count);
  return g;
}

namespace {

bool parse_id(std::string_view token, NodeId& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

}  // namespace

LoadedGraph parse_edge_list(std::istream& in, bool one_indexed, std::string_view source) {
  const std::string src(source);
  std::vector<Edge> edges;
  LoadReport report;
  NodeId max_id = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    view = view.substr(0, view.find('#'));
    if (view.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto fields = split_fields(view);
    NodeId u = 0;
    NodeId v = 0;
    if (fields.size() != 2 || !parse_id(fields[0], u) || !parse_id(fields[1], v)) {
      throw ParseError(src, line_no, "expected two integer node ids, got '" + line + "'");
    }
    if (one_indexed) {
      if (u == 0 || v == 0) throw ParseError(src, line_no, "node id 0 in a one-indexed file");
      --u;
      --v;
    }
    ++report.lines;
    max_id = std::max({max_id, u, v});
    edges.push_back({u, v});
  }
  if (edges.empty()) throw Error(src + ": edge list is empty");
  LoadedGraph out;
  out.graph = Graph::from_edges(static_cast<std::size_t>(max_id) + 1, edges, &report);
  out.report = report;
  return out;
}

LoadedGraph load_edge_list(const std::filesystem::path& path, bool one_indexed) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list " + path.string());
  return parse_edge_list(in, one_indexed, path.string());
}

void write_edge_list(const Graph& graph, std::ostream& out) {
  for (const Edge& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

void save_edge_list(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_edge_list(graph, out);
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace hetfair
