#include "hetfair/homophily.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "hetfair/error.hpp"
#include "hetfair/quadrature.hpp"
#include "text_format.hpp"

namespace hetfair {

Histogram::Histogram(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) throw Error("histogram needs at least one bin");
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw Error("histogram mass must be finite and non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error("histogram mass sums to " + std::to_string(total) + ", not 1");
  }
}

Histogram Histogram::normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error("histogram weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw Error("histogram has no mass");
  for (double& w : weights) w /= total;
  return Histogram(std::move(weights));
}

double Histogram::lower(std::size_t bin) const {
  return static_cast<double>(bin) / static_cast<double>(bins());
}
double Histogram::upper(std::size_t bin) const {
  return static_cast<double>(bin + 1) / static_cast<double>(bins());
}
double Histogram::center(std::size_t bin) const { return bin_center(bin, bins()); }

double Histogram::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < bins(); ++i) m += mass_[i] * center(i);
  return m;
}

std::size_t bin_index(double ratio, std::size_t bins) {
  if (bins == 0) throw Error("bin count must be positive");
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw Error("homophily ratio outside [0, 1]");
  const auto idx = static_cast<std::size_t>(ratio * static_cast<double>(bins));
  return std::min(idx, bins - 1);
}

double bin_center(std::size_t bin, std::size_t bins) {
  return (static_cast<double>(bin) + 0.5) / static_cast<double>(bins);
}

namespace {

void require_labeled(const NodeTable& t, NodeId node) {
  if (t.label(node) == kInvalid) {
    throw Error("node " + std::to_string(node) + " has an edge but no class label");
  }
}

std::size_t same_label_neighbors(const Graph& g, const NodeTable& t, NodeId node) {
  require_labeled(t, node);
  std::size_t same = 0;
  for (NodeId v : g.neighbors(node)) {
    require_labeled(t, v);
    if (t.label(v) == t.label(node)) ++same;
  }
  return same;
}

}  // namespace

double global_homophily(const Graph& g, const NodeTable& t) {
  if (t.size() != g.node_count()) throw Error("node table size does not match graph");
  if (g.edge_count() == 0) throw Error("global homophily is undefined without edges");
  std::size_t same = 0;
  for (const Edge& e : g.edges()) {
    require_labeled(t, e.u);
    require_labeled(t, e.v);
    if (t.label(e.u) == t.label(e.v)) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(g.edge_count());
}

double local_homophily(const Graph& g, const NodeTable& t, NodeId node) {
  if (t.size() != g.node_count()) throw Error("node table size does not match graph");
  const std::size_t degree = g.degree(node);
  if (degree == 0) throw Error("local homophily is undefined for isolated node " + std::to_string(node));
  return static_cast<double>(same_label_neighbors(g, t, node)) / static_cast<double>(degree);
}

std::vector<std::optional<double>> local_homophily_all(const Graph& g, const NodeTable& t) {
  if (t.size() != g.node_count()) throw Error("node table size does not match graph");
  std::vector<std::optional<double>> out(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) == 0) continue;
    out[v] = static_cast<double>(same_label_neighbors(g, t, v)) / static_cast<double>(g.degree(v));
  }
  return out;
}

Histogram histogram(std::span<const double> ratios, std::size_t bins) {
  if (bins == 0) throw Error("bin count must be positive");
  if (ratios.empty()) throw Error("histogram of an empty ratio set");
  std::vector<double> counts(bins, 0.0);
  for (double r : ratios) counts[bin_index(r, bins)] += 1.0;
  return Histogram::normalized(std::move(counts));
}

Histogram histogram(std::span<const std::optional<double>> ratios, std::size_t bins) {
  std::vector<double> defined;
  defined.reserve(ratios.size());
  for (const auto& r : ratios) {
    if (r) defined.push_back(*r);
  }
  return histogram(defined, bins);
}

double beta_density(const BetaGoal& goal, double x) {
  if (!(goal.alpha > 0.0 && goal.beta > 0.0)) throw Error("Beta shape parameters must be positive");
  if (x < 0.0 || x > 1.0) return 0.0;
  const double log_norm =
      std::lgamma(goal.alpha + goal.beta) - std::lgamma(goal.alpha) - std::lgamma(goal.beta);
  const double a = goal.alpha - 1.0;
  const double b = goal.beta - 1.0;
  // 0^0 = 1 keeps Beta(1, .) and Beta(., 1) finite at the endpoints.
  const double log_x = a == 0.0 ? 0.0 : a * std::log(x);
  const double log_1mx = b == 0.0 ? 0.0 : b * std::log1p(-x);
  return std::exp(log_norm + log_x + log_1mx);
}

Histogram beta_goal_histogram(const BetaGoal& goal, std::size_t bins) {
  if (bins < 2) throw Error("goal histogram needs at least two bins");
  if (!(goal.alpha > 0.0 && goal.beta > 0.0)) throw Error("Beta shape parameters must be positive");
  // Upper-half bins integrate the mirrored density on [1 - hi, 1 - lo] so that
  // the quadrature nodes never land where 1 - x rounds to zero.
  const BetaGoal mirrored{goal.beta, goal.alpha};
  const auto density = [&](double x) { return beta_density(goal, x); };
  const auto mirrored_density = [&](double x) { return beta_density(mirrored, x); };
  std::vector<double> mass(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const double lo = static_cast<double>(i) / static_cast<double>(bins);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(bins);
    mass[i] = 2 * i < bins
                  ? integrate_adaptive(density, lo, hi, 1e-10, 1e-300).value
                  : integrate_adaptive(mirrored_density, 1.0 - hi, 1.0 - lo, 1e-10, 1e-300).value;
  }
  return Histogram::normalized(std::move(mass));
}

double emd(const Histogram& p, const Histogram& q) {
  if (p.bins() != q.bins()) {
    throw Error("emd: bin counts differ (" + std::to_string(p.bins()) + " vs " +
                std::to_string(q.bins()) + ")");
  }
  double cdf_gap = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < p.bins(); ++k) {
    cdf_gap += p[k] - q[k];
    total += std::abs(cdf_gap);
  }
  return total / static_cast<double>(p.bins());
}

void write_histogram_csv(const Histogram& h, std::ostream& out) {
  out << "bin_lo,bin_hi,mass\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    out << detail::format_double(h.lower(i)) << ',' << detail::format_double(h.upper(i)) << ','
        << detail::format_double(h[i]) << '\n';
  }
}

}  // namespace hetfair
