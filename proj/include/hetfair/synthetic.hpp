#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hetfair/graph.hpp"
#include "hetfair/node_table.hpp"

namespace hetfair {

struct LabeledGraph {
  Graph graph;
  NodeTable table;
};

/// Stochastic block model. Block b holds block_sizes[b] consecutive nodes
/// labelled b; each pair (u, v) is linked independently with probability
/// probabilities[block(u)][block(v)]. Sensitive attributes are i.i.d.
/// Bernoulli(sensitive_share).
struct SbmParams {
  std::vector<std::size_t> block_sizes;
  std::vector<std::vector<double>> probabilities;
  double sensitive_share = 0.5;
  std::uint64_t seed = 0;
};

LabeledGraph stochastic_block_model(const SbmParams& params);

/// Equal-sized blocks tuned so the expected mean degree is `mean_degree` and
/// the expected edge homophily is `homophily`.
LabeledGraph planted_partition(std::size_t nodes, std::size_t classes, double mean_degree,
                               double homophily, std::uint64_t seed);

}  // namespace hetfair
