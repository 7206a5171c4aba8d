#include "hetfair/edit_log.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hetfair/error.hpp"

namespace hetfair {

using nlohmann::json;
using nlohmann::ordered_json;

void EditLog::push(EditPhase phase, EditOp op, NodeId u, NodeId v) {
  records_.push_back({records_.size(), phase, op, u, v});
}

void EditLog::append(const EditLog& other) {
  for (const EditRecord& r : other.records_) push(r.phase, r.op, r.u, r.v);
}

std::size_t EditLog::count(EditPhase phase) const {
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(),
                                                [&](const EditRecord& r) { return r.phase == phase; }));
}

Graph replay(const Graph& original, const EditLog& log) {
  std::vector<std::vector<NodeId>> adjacency(original.node_count());
  for (NodeId u = 0; u < original.node_count(); ++u) {
    auto nb = original.neighbors(u);
    adjacency[u].assign(nb.begin(), nb.end());
  }
  for (const EditRecord& r : log.records()) {
    if (r.u >= adjacency.size() || r.v >= adjacency.size() || r.u == r.v) {
      throw Error("edit " + std::to_string(r.seq) + " references an invalid node pair");
    }
    auto& a = adjacency[r.u];
    auto& b = adjacency[r.v];
    auto pos_a = std::lower_bound(a.begin(), a.end(), r.v);
    const bool present = pos_a != a.end() && *pos_a == r.v;
    if (r.op == EditOp::kAdd) {
      if (present) throw Error("edit " + std::to_string(r.seq) + " adds an existing edge");
      a.insert(pos_a, r.v);
      b.insert(std::lower_bound(b.begin(), b.end(), r.u), r.u);
    } else {
      if (!present) throw Error("edit " + std::to_string(r.seq) + " removes a missing edge");
      a.erase(pos_a);
      b.erase(std::lower_bound(b.begin(), b.end(), r.u));
    }
  }
  return Graph::from_adjacency(std::move(adjacency));
}

void write_edit_log(const EditLog& log, std::ostream& out) {
  ordered_json header = {{"seed", log.header.seed}, {"bins", log.header.bins}};
  header["alpha"] = log.header.alpha ? ordered_json(*log.header.alpha) : ordered_json(nullptr);
  header["beta"] = log.header.beta ? ordered_json(*log.header.beta) : ordered_json(nullptr);
  out << header.dump() << '\n';
  for (const EditRecord& r : log.records()) {
    ordered_json rec = {{"seq", r.seq},
                        {"phase", r.phase == EditPhase::kRewire ? "rewire" : "refine"},
                        {"op", r.op == EditOp::kAdd ? "add" : "remove"},
                        {"u", r.u},
                        {"v", r.v}};
    out << rec.dump() << '\n';
  }
}

EditLog read_edit_log(std::istream& in, std::string_view source) {
  const std::string src(source);
  EditLog log;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(src, line_no, e.what());
    }
    try {
      if (!have_header) {
        if (obj.contains("seq")) throw ParseError(src, line_no, "missing header record");
        log.header.seed = obj.at("seed").get<std::uint64_t>();
        log.header.bins = obj.at("bins").get<std::size_t>();
        if (!obj.at("alpha").is_null()) log.header.alpha = obj.at("alpha").get<double>();
        if (!obj.at("beta").is_null()) log.header.beta = obj.at("beta").get<double>();
        have_header = true;
        continue;
      }
      const auto phase = obj.at("phase").get<std::string>();
      const auto op = obj.at("op").get<std::string>();
      if ((phase != "rewire" && phase != "refine") || (op != "add" && op != "remove")) {
        throw ParseError(src, line_no, "unknown phase or op");
      }
      if (obj.at("seq").get<std::size_t>() != log.size()) {
        throw ParseError(src, line_no, "sequence numbers must be consecutive from 0");
      }
      log.push(phase == "rewire" ? EditPhase::kRewire : EditPhase::kRefine,
               op == "add" ? EditOp::kAdd : EditOp::kRemove, obj.at("u").get<NodeId>(),
               obj.at("v").get<NodeId>());
    } catch (const json::exception& e) {
      throw ParseError(src, line_no, e.what());
    }
  }
  if (!have_header) throw Error(src + ": edit log has no header");
  return log;
}

void save_edit_log(const EditLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_edit_log(log, out);
}

EditLog load_edit_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edit log " + path.string());
  return read_edit_log(in, path.string());
}

}  // namespace hetfair
