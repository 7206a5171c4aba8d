#include "hetfair/node_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <string>

#include "hetfair/error.hpp"

namespace hetfair {

NodeTable::NodeTable(std::vector<ClassId> labels, std::vector<ClassId> sensitive,
                     std::size_t feature_dim, std::vector<double> features)
    : labels_(std::move(labels)),
      sensitive_(std::move(sensitive)),
      feature_dim_(feature_dim),
      features_(std::move(features)) {
  if (labels_.size() != sensitive_.size()) {
    throw Error("label and sensitive columns have different lengths");
  }
  if (features_.size() != labels_.size() * feature_dim_) {
    throw Error("feature matrix does not match node count times feature dimension");
  }
  auto bad = [](ClassId c) { return c < kInvalid; };
  if (std::any_of(labels_.begin(), labels_.end(), bad) ||
      std::any_of(sensitive_.begin(), sensitive_.end(), bad)) {
    throw Error("negative class or sensitive id");
  }
}

std::span<const double> NodeTable::features(NodeId node) const {
  if (node >= size()) throw Error("node id out of range");
  return std::span<const double>(features_).subspan(node * feature_dim_, feature_dim_);
}

std::size_t NodeTable::class_count() const {
  ClassId top = kInvalid;
  for (ClassId c : labels_) top = std::max(top, c);
  return static_cast<std::size_t>(top + 1);
}

std::vector<std::size_t> NodeTable::class_histogram() const {
  std::vector<std::size_t> counts(class_count(), 0);
  for (ClassId c : labels_) {
    if (c != kInvalid) ++counts[static_cast<std::size_t>(c)];
  }
  return counts;
}

NodeTable NodeTable::subset(std::span<const NodeId> nodes) const {
  std::vector<ClassId> labels;
  std::vector<ClassId> sensitive;
  std::vector<double> features;
  labels.reserve(nodes.size());
  sensitive.reserve(nodes.size());
  features.reserve(nodes.size() * feature_dim_);
  for (NodeId v : nodes) {
    labels.push_back(label(v));
    sensitive.push_back(this->sensitive(v));
    auto f = this->features(v);
    features.insert(features.end(), f.begin(), f.end());
  }
  return NodeTable(std::move(labels), std::move(sensitive), feature_dim_, std::move(features));
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

NodeTable parse_node_table(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(src + ": node table is empty");
  ++line_no;
  auto header = split_csv(line);
  for (auto& h : header) h = trim(h);
  if (header.size() < 3 || header[0] != "node_id" || header[1] != "label" ||
      header[2] != "sensitive") {
    throw ParseError(src, line_no, "header must start with node_id,label,sensitive");
  }
  const std::size_t feature_dim = header.size() - 3;

  struct Row {
    ClassId label;
    ClassId sensitive;
    std::vector<double> features;
  };
  std::vector<std::optional<Row>> rows;

  auto parse_class = [&](std::string_view cell, const char* what) -> ClassId {
    cell = trim(cell);
    if (cell.empty()) return kInvalid;
    auto v = parse_number<ClassId>(cell);
    if (!v || *v < 0) {
      throw ParseError(src, line_no, std::string("non-integer ") + what + " '" + std::string(cell) + "'");
    }
    return *v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ParseError(src, line_no, "expected " + std::to_string(header.size()) + " columns");
    }
    auto id = parse_number<NodeId>(trim(cells[0]));
    if (!id) throw ParseError(src, line_no, "invalid node_id '" + std::string(cells[0]) + "'");
    Row row{parse_class(cells[1], "label"), parse_class(cells[2], "sensitive"), {}};
    row.features.reserve(feature_dim);
    for (std::size_t f = 0; f < feature_dim; ++f) {
      auto cell = trim(cells[3 + f]);
      if (cell.empty()) {
        row.features.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      auto value = parse_number<double>(cell);
      if (!value) throw ParseError(src, line_no, "invalid feature value '" + std::string(cell) + "'");
      row.features.push_back(*value);
    }
    if (*id >= rows.size()) rows.resize(static_cast<std::size_t>(*id) + 1);
    if (rows[*id]) throw ParseError(src, line_no, "duplicate node_id " + std::to_string(*id));
    rows[*id] = std::move(row);
  }
  if (rows.empty()) throw Error(src + ": node table has no rows");

  std::vector<ClassId> labels;
  std::vector<ClassId> sensitive;
  std::vector<double> features;
  labels.reserve(rows.size());
  sensitive.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) throw Error(src + ": node_id " + std::to_string(i) + " is missing (ids must cover 0..n-1)");
    labels.push_back(rows[i]->label);
    sensitive.push_back(rows[i]->sensitive);
    features.insert(features.end(), rows[i]->features.begin(), rows[i]->features.end());
  }
  return NodeTable(std::move(labels), std::move(sensitive), feature_dim, std::move(features));
}

NodeTable load_node_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open node table " + path.string());
  return parse_node_table(in, path.string());
}

}  // namespace hetfair
