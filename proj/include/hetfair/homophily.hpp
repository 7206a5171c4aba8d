#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "hetfair/graph.hpp"
#include "hetfair/node_table.hpp"

namespace hetfair {

/// Probability mass over b equal-width homophily bins [i/b, (i+1)/b), the
/// last bin closed at 1.
class Histogram {
 public:
  Histogram() = default;

  /// Validates non-negativity and unit total (within 1e-9).
  explicit Histogram(std::vector<double> mass);

  /// Scales non-negative weights to unit total. Throws when all are zero.
  static Histogram normalized(std::vector<double> weights);

  std::size_t bins() const noexcept { return mass_.size(); }
  double operator[](std::size_t bin) const { return mass_.at(bin); }
  std::span<const double> mass() const noexcept { return mass_; }

  double lower(std::size_t bin) const;
  double upper(std::size_t bin) const;
  double center(std::size_t bin) const;

  /// Mean using bin centers.
  double mean() const;

 private:
  std::vector<double> mass_;
};

std::size_t bin_index(double ratio, std::size_t bins);
double bin_center(std::size_t bin, std::size_t bins);

/// Edge homophily: share of edges whose endpoints carry the same label.
double global_homophily(const Graph& g, const NodeTable& t);

/// Share of a node's neighbors that carry its label. Throws for isolated nodes.
double local_homophily(const Graph& g, const NodeTable& t, NodeId node);

/// local_homophily for every node; std::nullopt marks isolated nodes.
std::vector<std::optional<double>> local_homophily_all(const Graph& g, const NodeTable& t);

Histogram histogram(std::span<const double> ratios, std::size_t bins);

/// Histogram over the defined entries only.
Histogram histogram(std::span<const std::optional<double>> ratios, std::size_t bins);

struct BetaGoal {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const { return alpha / (alpha + beta); }
};

/// Normalized Beta(alpha, beta) density.
double beta_density(const BetaGoal& goal, double x);

/// Per-bin Beta probability, each bin integrated adaptively to a relative
/// error of 1e-8 and renormalized.
Histogram beta_goal_histogram(const BetaGoal& goal, std::size_t bins);

/// 1-D earth mover's distance with ground cost |center_i - center_j|:
/// (1/b) * sum_k |CDF_p(k) - CDF_q(k)|.
double emd(const Histogram& p, const Histogram& q);

/// `bin_lo,bin_hi,mass` rows.
void write_histogram_csv(const Histogram& h, std::ostream& out);

}  // namespace hetfair
