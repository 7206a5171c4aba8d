#include "hetfair/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "hetfair/error.hpp"

namespace hetfair {

Histogram concentrate(const Histogram& p, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw Error("concentrate: gamma must be a non-negative number");
  std::vector<double> weights(p.bins(), 0.0);
  for (std::size_t b = 0; b < p.bins(); ++b) {
    if (p[b] > 0.0) weights[b] = std::pow(p[b], gamma);
  }
  return Histogram::normalized(std::move(weights));
}

Histogram invert(const Histogram& p) {
  std::vector<double> weights(p.bins(), 0.0);
  for (std::size_t b = 0; b < p.bins(); ++b) {
    if (p[b] > 0.0) weights[b] = 1.0 / p[b];
  }
  return Histogram::normalized(std::move(weights));
}

std::string_view to_string(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain: return "train";
    case SplitTag::kVal: return "val";
    case SplitTag::kTest: return "test";
    case SplitTag::kExcluded: return "excluded";
  }
  return "excluded";
}

std::size_t SplitAssignment::count(SplitTag tag) const {
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), tag));
}

namespace {

/// Smallest c with sum_b n_b * min(1, c * w_b) >= target, by bisection.
double solve_scale(std::span<const std::size_t> sizes, std::span<const double> weights, double target) {
  auto filled = [&](double c) {
    double total = 0.0;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
      total += static_cast<double>(sizes[b]) * std::min(1.0, c * weights[b]);
    }
    return total;
  };
  double min_weight = 1.0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    if (sizes[b] > 0) min_weight = std::min(min_weight, weights[b]);
  }
  double lo = 0.0;
  double hi = 1.0 / min_weight;  // every bin saturated
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (filled(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

SplitAssignment stratified_split(std::span<const std::optional<double>> ratios,
                                 const SplitOptions& options) {
  if (!(options.gamma >= 0.0)) throw Error("stratified_split: gamma must be non-negative");
  if (!(options.train_frac >= 0.0 && options.train_frac <= 1.0)) {
    throw Error("stratified_split: train fraction must lie in [0, 1]");
  }
  if (!(options.val_frac >= 0.0 && options.val_frac < 1.0)) {
    throw Error("stratified_split: validation fraction must lie in [0, 1)");
  }
  const std::size_t b = options.bins;
  if (b == 0) throw Error("stratified_split: bin count must be positive");

  SplitAssignment out;
  out.tags.assign(ratios.size(), SplitTag::kExcluded);
  out.gamma = options.gamma;
  out.bins = b;
  out.seed = options.seed;

  std::vector<std::vector<NodeId>> members(b);
  std::size_t eligible = 0;
  for (NodeId v = 0; v < ratios.size(); ++v) {
    if (!ratios[v]) continue;
    members[bin_index(*ratios[v], b)].push_back(v);
    ++eligible;
  }
  if (eligible == 0) throw Error("stratified_split: no node has a defined homophily ratio");

  std::vector<std::size_t> sizes(b);
  for (std::size_t i = 0; i < b; ++i) sizes[i] = members[i].size();
  const Histogram p = histogram(ratios, b);
  const Histogram concentrated = concentrate(p, options.gamma);
  const Histogram inverted = invert(concentrated);
  out.train_weight.assign(b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    if (sizes[i] > 0) out.train_weight[i] = concentrated[i] / (concentrated[i] + inverted[i]);
  }

  const double target = options.train_frac * static_cast<double>(eligible);
  out.scale = target > 0.0 ? solve_scale(sizes, out.train_weight, target) : 0.0;

  // Per-bin pool sizes, largest remainder so the total is round(target).
  std::vector<std::size_t> pool_sizes(b, 0);
  std::vector<double> remainder(b, 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < b; ++i) {
    const double quota = std::min(1.0, out.scale * out.train_weight[i]) * static_cast<double>(sizes[i]);
    pool_sizes[i] = std::min(sizes[i], static_cast<std::size_t>(std::floor(quota)));
    remainder[i] = quota - static_cast<double>(pool_sizes[i]);
    assigned += pool_sizes[i];
  }
  const auto wanted = static_cast<std::size_t>(std::llround(target));
  std::vector<std::size_t> order(b);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return remainder[x] > remainder[y]; });
  for (std::size_t i : order) {
    if (assigned >= wanted) break;
    if (pool_sizes[i] < sizes[i] && remainder[i] > 0.0) {
      ++pool_sizes[i];
      ++assigned;
    }
  }

  std::mt19937_64 rng(options.seed);
  std::vector<NodeId> pool;
  std::vector<double> pool_ratios;
  std::vector<double> test_ratios;
  out.per_bin_train_share.assign(b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    auto& nodes = members[i];
    std::shuffle(nodes.begin(), nodes.end(), rng);
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      const NodeId v = nodes[r];
      if (r < pool_sizes[i]) {
        pool.push_back(v);
        pool_ratios.push_back(*ratios[v]);
        out.tags[v] = SplitTag::kTrain;
      } else {
        test_ratios.push_back(*ratios[v]);
        out.tags[v] = SplitTag::kTest;
      }
    }
    if (sizes[i] > 0) {
      out.per_bin_train_share[i] = static_cast<double>(pool_sizes[i]) / static_cast<double>(sizes[i]);
    }
  }

  std::sort(pool.begin(), pool.end());
  std::shuffle(pool.begin(), pool.end(), rng);
  const auto val_count = static_cast<std::size_t>(
      std::llround(options.val_frac * static_cast<double>(pool.size())));
  for (std::size_t r = 0; r < val_count; ++r) out.tags[pool[r]] = SplitTag::kVal;

  if (!pool_ratios.empty() && !test_ratios.empty()) {
    out.emd_train_test = emd(histogram(pool_ratios, b), histogram(test_ratios, b));
  }
  return out;
}

void write_split_csv(const SplitAssignment& split, std::ostream& out) {
  out << "node_id,split\n";
  for (std::size_t v = 0; v < split.tags.size(); ++v) out << v << ',' << to_string(split.tags[v]) << '\n';
}

}  // namespace hetfair
