#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "hetfair/graph.hpp"

namespace hetfair {

using ClassId = std::int32_t;

/// Marker for a missing class label or sensitive attribute.
inline constexpr ClassId kInvalid = -1;

/// Per-node class labels, sensitive attributes and optional dense features,
/// indexed by node id.
class NodeTable {
 public:
  NodeTable() = default;
  NodeTable(std::vector<ClassId> labels, std::vector<ClassId> sensitive,
            std::size_t feature_dim = 0, std::vector<double> features = {});

  std::size_t size() const noexcept { return labels_.size(); }

  ClassId label(NodeId node) const { return labels_.at(node); }
  ClassId sensitive(NodeId node) const { return sensitive_.at(node); }
  std::span<const ClassId> labels() const noexcept { return labels_; }
  std::span<const ClassId> sensitive() const noexcept { return sensitive_; }

  std::size_t feature_dim() const noexcept { return feature_dim_; }
  std::span<const double> features(NodeId node) const;

  /// Both label and sensitive attribute present.
  bool valid(NodeId node) const {
    return labels_.at(node) != kInvalid && sensitive_.at(node) != kInvalid;
  }

  /// One past the largest valid label (0 when no node is labeled).
  std::size_t class_count() const;

  /// Number of nodes carrying each label 0..class_count()-1.
  std::vector<std::size_t> class_histogram() const;

  /// Rows for `nodes`, in the given order.
  NodeTable subset(std::span<const NodeId> nodes) const;

  friend bool operator==(const NodeTable&, const NodeTable&) = default;

 private:
  std::vector<ClassId> labels_;
  std::vector<ClassId> sensitive_;
  std::size_t feature_dim_ = 0;
  std::vector<double> features_;
};

/// Reads `node_id,label,sensitive[,f0,f1,...]`. Empty label or sensitive
/// cells become kInvalid; empty feature cells become NaN. node_id values must
/// cover 0..n-1 exactly once.
NodeTable parse_node_table(std::istream& in, std::string_view source = "<stream>");
NodeTable load_node_table(const std::filesystem::path& path);

}  // namespace hetfair
