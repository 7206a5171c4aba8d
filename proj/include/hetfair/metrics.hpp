#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hetfair/node_table.hpp"

namespace hetfair {

/// Predictions for a node set. Only rows with mask[i] set are scored; an
/// empty mask scores every row.
struct PredictionTable {
  std::vector<NodeId> node_ids;
  std::vector<ClassId> y_true;
  std::vector<ClassId> y_pred;
  std::vector<ClassId> sensitive;  ///< 0 or 1
  std::vector<bool> mask;

  std::size_t size() const noexcept { return y_pred.size(); }
  bool evaluated(std::size_t row) const { return mask.empty() || mask[row]; }
  std::size_t evaluated_count() const;
  /// One past the largest class id in y_true or y_pred.
  std::size_t class_count() const;
};

/// `node_id,y_true,y_pred,sensitive` rows.
PredictionTable parse_predictions(std::istream& in, std::string_view source = "<stream>");
PredictionTable load_predictions(const std::filesystem::path& path);

/// |P(y_pred = preferred | s = 0) - P(y_pred = preferred | s = 1)| over the
/// evaluated rows. Throws when a sensitive group is empty.
double statistical_parity(const PredictionTable& p, ClassId preferred);

/// statistical_parity for every class 0..class_count()-1.
std::vector<double> per_class_sp(const PredictionTable& p);

enum class MulticlassSpMode {
  kOneVsRest,  ///< max over classes of statistical_parity
  kPairwise,   ///< max over class pairs (a, b) of half the gap in P(a) - P(b) between groups
};

double multiclass_sp(const PredictionTable& p, MulticlassSpMode mode = MulticlassSpMode::kOneVsRest);

/// Micro-averaged F1 over the evaluated rows; equals accuracy for
/// single-label predictions.
double micro_f1(const PredictionTable& p);

/// Scores of one model on one dataset and evaluation subset.
struct MetricRecord {
  std::string dataset;
  std::string model;
  std::string subset;
  double f1 = 0.0;
  double sp = 0.0;
  std::size_t n_eval = 0;
};

struct MetricDelta {
  double f1 = 0.0;
  double sp = 0.0;
};

/// later - earlier, component-wise. Both runs must name the same dataset
/// and model.
MetricDelta delta_metrics(const MetricRecord& earlier, const MetricRecord& later);

/// model - baseline, component-wise. Both must share the evaluation subset.
MetricRecord baseline_adjust(const MetricRecord& model, const MetricRecord& baseline);

}  // namespace hetfair
