#include "hetfair/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>

#include "hetfair/error.hpp"

namespace hetfair {

std::size_t PredictionTable::evaluated_count() const {
  if (mask.empty()) return size();
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

std::size_t PredictionTable::class_count() const {
  ClassId top = kInvalid;
  for (ClassId c : y_true) top = std::max(top, c);
  for (ClassId c : y_pred) top = std::max(top, c);
  return static_cast<std::size_t>(top + 1);
}

namespace {

void validate(const PredictionTable& p) {
  const std::size_t n = p.size();
  if (p.y_true.size() != n || p.sensitive.size() != n || (!p.mask.empty() && p.mask.size() != n)) {
    throw Error("prediction table columns have different lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (p.y_pred[i] < 0 || p.y_true[i] < 0) throw Error("class ids must be non-negative");
    if (p.sensitive[i] != 0 && p.sensitive[i] != 1) throw Error("sensitive attribute must be 0 or 1");
  }
}

/// Rate of each predicted class within each sensitive group.
struct GroupRates {
  std::vector<double> rate[2];
};

GroupRates group_rates(const PredictionTable& p) {
  validate(p);
  const std::size_t classes = p.class_count();
  std::vector<std::size_t> hits[2] = {std::vector<std::size_t>(classes, 0),
                                      std::vector<std::size_t>(classes, 0)};
  std::size_t group_size[2] = {0, 0};
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p.evaluated(i)) continue;
    const auto s = static_cast<std::size_t>(p.sensitive[i]);
    ++group_size[s];
    ++hits[s][static_cast<std::size_t>(p.y_pred[i])];
  }
  if (group_size[0] == 0 || group_size[1] == 0) {
    throw Error("statistical parity needs both sensitive groups in the evaluated set");
  }
  GroupRates out;
  for (std::size_t s = 0; s < 2; ++s) {
    out.rate[s].resize(classes);
    for (std::size_t c = 0; c < classes; ++c) {
      out.rate[s][c] = static_cast<double>(hits[s][c]) / static_cast<double>(group_size[s]);
    }
  }
  return out;
}

std::optional<ClassId> parse_int(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  ClassId v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

PredictionTable parse_predictions(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw Error(src + ": prediction file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "node_id,y_true,y_pred,sensitive") {
    throw ParseError(src, line_no, "header must be node_id,y_true,y_pred,sensitive");
  }
  PredictionTable p;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (auto comma = rest.find(','); comma != std::string_view::npos; comma = rest.find(',')) {
      cells.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    cells.push_back(rest);
    if (cells.size() != 4) throw ParseError(src, line_no, "expected 4 columns");
    std::optional<ClassId> values[4];
    for (std::size_t c = 0; c < 4; ++c) {
      values[c] = parse_int(cells[c]);
      if (!values[c] || *values[c] < 0) throw ParseError(src, line_no, "expected non-negative integers");
    }
    if (*values[3] > 1) throw ParseError(src, line_no, "sensitive attribute must be 0 or 1");
    p.node_ids.push_back(static_cast<NodeId>(*values[0]));
    p.y_true.push_back(*values[1]);
    p.y_pred.push_back(*values[2]);
    p.sensitive.push_back(*values[3]);
  }
  if (p.size() == 0) throw Error(src + ": prediction file has no rows");
  return p;
}

PredictionTable load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open predictions " + path.string());
  return parse_predictions(in, path.string());
}

double statistical_parity(const PredictionTable& p, ClassId preferred) {
  const GroupRates rates = group_rates(p);
  if (preferred < 0) throw Error("preferred class must be non-negative");
  const auto c = static_cast<std::size_t>(preferred);
  const double r0 = c < rates.rate[0].size() ? rates.rate[0][c] : 0.0;
  const double r1 = c < rates.rate[1].size() ? rates.rate[1][c] : 0.0;
  return std::abs(r0 - r1);
}

std::vector<double> per_class_sp(const PredictionTable& p) {
  const GroupRates rates = group_rates(p);
  std::vector<double> out(rates.rate[0].size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = std::abs(rates.rate[0][c] - rates.rate[1][c]);
  return out;
}

double multiclass_sp(const PredictionTable& p, MulticlassSpMode mode) {
  const GroupRates rates = group_rates(p);
  const std::size_t classes = rates.rate[0].size();
  if (classes < 2) throw Error("multiclass_sp needs at least two classes");
  double best = 0.0;
  if (mode == MulticlassSpMode::kOneVsRest) {
    for (std::size_t c = 0; c < classes; ++c) best = std::max(best, std::abs(rates.rate[0][c] - rates.rate[1][c]));
    return best;
  }
  for (std::size_t a = 0; a < classes; ++a) {
    for (std::size_t b = a + 1; b < classes; ++b) {
      const double gap0 = rates.rate[0][a] - rates.rate[0][b];
      const double gap1 = rates.rate[1][a] - rates.rate[1][b];
      best = std::max(best, 0.5 * std::abs(gap0 - gap1));
    }
  }
  return best;
}

double micro_f1(const PredictionTable& p) {
  validate(p);
  std::size_t correct = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p.evaluated(i)) continue;
    ++total;
    if (p.y_pred[i] == p.y_true[i]) ++correct;
  }
  if (total == 0) throw Error("micro_f1 of an empty evaluation set");
  // With one label per node every false positive is some other class's false
  // negative, so micro precision, recall and F1 all equal accuracy.
  return static_cast<double>(correct) / static_cast<double>(total);
}

MetricDelta delta_metrics(const MetricRecord& earlier, const MetricRecord& later) {
  if (earlier.dataset != later.dataset || earlier.model != later.model) {
    throw Error("delta_metrics: runs must share dataset and model");
  }
  return {later.f1 - earlier.f1, later.sp - earlier.sp};
}

MetricRecord baseline_adjust(const MetricRecord& model, const MetricRecord& baseline) {
  if (model.subset != baseline.subset || model.n_eval != baseline.n_eval) {
    throw Error("baseline_adjust: model and baseline were scored on different subsets");
  }
  MetricRecord out = model;
  out.f1 = model.f1 - baseline.f1;
  out.sp = model.sp - baseline.sp;
  return out;
}

}  // namespace hetfair
