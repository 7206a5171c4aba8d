#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hetfair/homophily.hpp"

namespace hetfair {

/// Raises every bin to `gamma` and renormalizes. Empty bins stay empty for
/// every gamma, including 0.
Histogram concentrate(const Histogram& p, double gamma);

/// Reciprocal of every non-empty bin, renormalized; empty bins stay empty.
Histogram invert(const Histogram& p);

enum class SplitTag { kTrain, kVal, kTest, kExcluded };

std::string_view to_string(SplitTag tag);

struct SplitOptions {
  double gamma = 0.0;
  std::size_t bins = 10;
  double train_frac = 0.8;
  double val_frac = 0.2;
  std::uint64_t seed = 0;
};

struct SplitAssignment {
  std::vector<SplitTag> tags;  ///< per node
  double gamma = 0.0;
  std::size_t bins = 0;
  std::uint64_t seed = 0;
  double scale = 0.0;                        ///< c in min(1, c * w_b)
  std::vector<double> train_weight;          ///< w_b per bin
  std::vector<double> per_bin_train_share;   ///< realized (train + val) / n_b, 0 for empty bins
  double emd_train_test = 0.0;               ///< training pool vs test histograms

  std::size_t count(SplitTag tag) const;
};

/// Homophily-stratified train/val/test split. Bin b receives a train
/// propensity w_b = P^g_b / (P^g_b + inv(P^g)_b); one scale c is found so that
/// sum_b n_b * min(1, c * w_b) equals train_frac * N, and each bin's training
/// pool is drawn at random with largest-remainder rounding. val is carved from
/// the training pool. Nodes with no ratio are excluded.
SplitAssignment stratified_split(std::span<const std::optional<double>> ratios,
                                 const SplitOptions& options);

/// `node_id,split` rows.
void write_split_csv(const SplitAssignment& split, std::ostream& out);

}  // namespace hetfair
