#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "hetfair/graph.hpp"

namespace hetfair {

enum class EditPhase { kRewire, kRefine };
enum class EditOp { kAdd, kRemove };

struct EditRecord {
  std::size_t seq = 0;
  EditPhase phase = EditPhase::kRewire;
  EditOp op = EditOp::kAdd;
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const EditRecord&, const EditRecord&) = default;
};

/// Generator parameters stored in the log header.
struct EditLogHeader {
  std::uint64_t seed = 0;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::size_t bins = 0;

  friend bool operator==(const EditLogHeader&, const EditLogHeader&) = default;
};

/// Ordered, replayable list of edge edits.
class EditLog {
 public:
  EditLogHeader header;

  const std::vector<EditRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  /// Appends with the next sequence number.
  void push(EditPhase phase, EditOp op, NodeId u, NodeId v);

  /// Appends other's records, renumbering them after this log's last record.
  void append(const EditLog& other);

  std::size_t count(EditPhase phase) const;

  friend bool operator==(const EditLog&, const EditLog&) = default;

 private:
  std::vector<EditRecord> records_;
};

/// Applies the log to `original`. Throws when an ADD duplicates an existing
/// edge or a REMOVE targets a missing one.
Graph replay(const Graph& original, const EditLog& log);

/// JSON lines: a header object {"seed","alpha","beta","bins"} then one
/// {"seq","phase","op","u","v"} object per edit.
void write_edit_log(const EditLog& log, std::ostream& out);
EditLog read_edit_log(std::istream& in, std::string_view source = "<stream>");
void save_edit_log(const EditLog& log, const std::filesystem::path& path);
EditLog load_edit_log(const std::filesystem::path& path);

}  // namespace hetfair
