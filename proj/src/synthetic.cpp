#include "hetfair/synthetic.hpp"

#include <random>

#include "hetfair/error.hpp"

namespace hetfair {

LabeledGraph stochastic_block_model(const SbmParams& params) {
  const std::size_t blocks = params.block_sizes.size();
  if (blocks == 0) throw Error("stochastic_block_model: no blocks");
  if (params.probabilities.size() != blocks) throw Error("stochastic_block_model: probability matrix size");
  for (std::size_t a = 0; a < blocks; ++a) {
    if (params.probabilities[a].size() != blocks) throw Error("stochastic_block_model: probability matrix size");
    for (std::size_t b = 0; b < blocks; ++b) {
      const double p = params.probabilities[a][b];
      if (!(p >= 0.0 && p <= 1.0) || p != params.probabilities[b][a]) {
        throw Error("stochastic_block_model: probabilities must be symmetric and in [0, 1]");
      }
    }
  }

  std::vector<ClassId> labels;
  for (std::size_t b = 0; b < blocks; ++b) labels.insert(labels.end(), params.block_sizes[b], static_cast<ClassId>(b));
  const std::size_t n = labels.size();

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    const auto& row = params.probabilities[static_cast<std::size_t>(labels[u])];
    for (NodeId v = u + 1; v < n; ++v) {
      if (unit(rng) < row[static_cast<std::size_t>(labels[v])]) edges.push_back({u, v});
    }
  }
  std::vector<ClassId> sensitive(n);
  for (auto& s : sensitive) s = unit(rng) < params.sensitive_share ? 1 : 0;

  return {Graph::from_edges(n, edges), NodeTable(std::move(labels), std::move(sensitive))};
}

LabeledGraph planted_partition(std::size_t nodes, std::size_t classes, double mean_degree,
                               double homophily, std::uint64_t seed) {
  if (classes < 2 || nodes < 2 * classes) throw Error("planted_partition: need at least two nodes per class");
  if (!(homophily >= 0.0 && homophily <= 1.0)) throw Error("planted_partition: homophily must be in [0, 1]");
  const std::size_t block = nodes / classes;
  const double p_in = homophily * mean_degree / static_cast<double>(block - 1);
  const double p_out = (1.0 - homophily) * mean_degree / static_cast<double>(nodes - block);
  if (p_in > 1.0 || p_out > 1.0) throw Error("planted_partition: mean degree too large for the block sizes");

  SbmParams params;
  params.block_sizes.assign(classes, block);
  params.block_sizes.back() += nodes - block * classes;
  params.probabilities.assign(classes, std::vector<double>(classes, p_out));
  for (std::size_t c = 0; c < classes; ++c) params.probabilities[c][c] = p_in;
  params.seed = seed;
  return stochastic_block_model(params);
}

}  // namespace hetfair
