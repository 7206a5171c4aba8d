#include "hetfair/theory.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "hetfair/error.hpp"
#include "seeding.hpp"
#include "text_format.hpp"

namespace hetfair::theory {

void validate(const TheoryParams& p) {
  if (!(p.k > 0 && p.k < p.n)) throw Error("theory: need 0 < k < n");
  if (!(p.d >= 1.0)) throw Error("theory: degree must be at least 1");
  if (!(p.h >= 0.0 && p.h <= 1.0)) throw Error("theory: homophily must lie in [0, 1]");
  const double shifted = p.h + p.alpha_shift;
  if (!(shifted >= 0.0 && shifted <= 1.0)) throw Error("theory: h + alpha must lie in [0, 1]");
  if (!(p.sigma_l >= 0.0 && p.sigma_s >= 0.0)) throw Error("theory: sigma must be non-negative");
  if (!(p.lambda_reg >= 0.0)) throw Error("theory: lambda must be non-negative");
  if (!std::isfinite(p.mu_l) || !std::isfinite(p.mu_s)) throw Error("theory: feature means must be finite");
}

double aggregation_coefficient(double h, double d) { return 1.0 + d * (2.0 * h - 1.0); }

Mat2 Mat2::inverse() const {
  const double det = determinant();
  if (det == 0.0) throw Error("singular 2x2 matrix");
  Mat2 out;
  out(0, 0) = m[1][1] / det;
  out(0, 1) = -m[0][1] / det;
  out(1, 0) = -m[1][0] / det;
  out(1, 1) = m[0][0] / det;
  return out;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 out;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
  }
  return out;
}

Vec2 operator*(const Vec2& row, const Mat2& w) {
  return {row[0] * w(0, 0) + row[1] * w(1, 0), row[0] * w(0, 1) + row[1] * w(1, 1)};
}

namespace {

/// N(mean, sd) that degrades to the constant `mean` when sd == 0.
double draw(std::mt19937_64& rng, double mean, double sd) {
  if (sd == 0.0) return mean;
  return std::normal_distribution<double>(mean, sd)(rng);
}

/// Training row for a y = s = 0 node (`group_zero`) or a y = s = 1 node.
Vec2 training_row(const TheoryParams& p, bool group_zero, double label_feature, double sensitive_feature) {
  const double scale = aggregation_coefficient(p.h, p.d) * (group_zero ? -1.0 : 1.0);
  return {scale * label_feature, scale * sensitive_feature};
}

/// Test row at homophily h + alpha for a y = 0 node with sensitive attribute s.
Vec2 test_row(const TheoryParams& p, int sensitive, double label_feature, double sensitive_feature) {
  const double scale = aggregation_coefficient(p.h + p.alpha_shift, p.d);
  if (sensitive == 0) return {-scale * label_feature, -scale * sensitive_feature};
  return {-scale * label_feature, scale * sensitive_feature};
}

void require_regular(const TheoryParams& p) {
  if (aggregation_coefficient(p.h, p.d) == 0.0) {
    throw Error("theory: 1 + d(2h - 1) = 0 makes the aggregated representations vanish");
  }
}

/// Accumulates R^T R and R^T Y without materializing R.
struct NormalEquations {
  Mat2 gram;
  Mat2 cross;

  void add(const Vec2& r, const Vec2& y) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        gram(a, b) += r[a] * r[b];
        cross(a, b) += r[a] * y[b];
      }
    }
  }

  Mat2 solve(double ridge) const {
    Mat2 lhs = gram;
    lhs(0, 0) += ridge;
    lhs(1, 1) += ridge;
    const double scale = std::abs(lhs(0, 0)) + std::abs(lhs(1, 1));
    if (!(std::abs(lhs.determinant()) > 1e-13 * scale * scale)) {
      throw Error("ridge system is numerically singular; increase lambda");
    }
    return lhs.inverse() * cross;
  }
};

}  // namespace

TrainingSample sample_training_representations(const TheoryParams& params, std::mt19937_64& rng) {
  validate(params);
  TrainingSample out;
  out.representations.reserve(params.n);
  out.targets.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    const bool group_zero = i < params.k;
    const double p = draw(rng, params.mu_l, params.sigma_l);
    const double q = draw(rng, params.mu_s, params.sigma_s);
    out.representations.push_back(training_row(params, group_zero, p, q));
    out.targets.push_back(group_zero ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0});
  }
  return out;
}

Mat2 fit_ridge_weights(std::span<const Vec2> representations, std::span<const Vec2> targets, double ridge) {
  if (representations.size() != targets.size()) throw Error("R and Y have different row counts");
  NormalEquations eq;
  for (std::size_t i = 0; i < representations.size(); ++i) eq.add(representations[i], targets[i]);
  return eq.solve(ridge);
}

double aggregated_ridge(const TheoryParams& params) {
  const double c = aggregation_coefficient(params.h, params.d);
  return params.lambda_reg * c * c;
}

Mat2 expected_weights(const TheoryParams& params) {
  validate(params);
  require_regular(params);
  if (!(params.lambda_reg > 0.0)) {
    throw Error("expected_weights: lambda must be positive (the expected Gram matrix has rank one)");
  }
  const double n = static_cast<double>(params.n);
  const double k = static_cast<double>(params.k);
  const double lambda = params.lambda_reg;
  const double ml = params.mu_l;
  const double ms = params.mu_s;
  const double c = aggregation_coefficient(params.h, params.d);

  const double det = (n * ml * ml + lambda) * (n * ms * ms + lambda) - (n * ml * ms) * (n * ml * ms);
  Mat2 adjugate;
  adjugate(0, 0) = n * ms * ms + lambda;
  adjugate(0, 1) = -n * ml * ms;
  adjugate(1, 0) = -n * ml * ms;
  adjugate(1, 1) = n * ml * ml + lambda;
  Mat2 moments;
  moments(0, 0) = -k * ml;
  moments(0, 1) = (n - k) * ml;
  moments(1, 0) = -k * ms;
  moments(1, 1) = (n - k) * ms;

  Mat2 w = adjugate * moments;
  const double scale = 1.0 / (c * det);
  for (auto& row : w.m) {
    for (double& x : row) x *= scale;
  }
  return w;
}

Vec2 expected_test_representation(const TheoryParams& params, int sensitive) {
  validate(params);
  if (sensitive != 0 && sensitive != 1) throw Error("sensitive attribute must be 0 or 1");
  return test_row(params, sensitive, params.mu_l, params.mu_s);
}

double expected_logit_gap(const TheoryParams& params) {
  validate(params);
  require_regular(params);
  const double n = static_cast<double>(params.n);
  const double k = static_cast<double>(params.k);
  const double ms2 = params.mu_s * params.mu_s;
  const double norm2 = params.mu_l * params.mu_l + ms2;
  if (params.lambda_reg + norm2 * n == 0.0) throw Error("expected_logit_gap: zero feature signal");
  const double shifted = aggregation_coefficient(params.h + params.alpha_shift, params.d);
  const double base = aggregation_coefficient(params.h, params.d);
  return ms2 * k * shifted / (base * (params.lambda_reg + norm2 * n));
}

double composed_logit_gap(const TheoryParams& params) {
  const Mat2 w = expected_weights(params);
  const Vec2 u = expected_test_representation(params, 0) * w;
  const Vec2 v = expected_test_representation(params, 1) * w;
  return u[0] - v[0];
}

double expected_gap_slope(const TheoryParams& params) {
  validate(params);
  require_regular(params);
  const double n = static_cast<double>(params.n);
  const double k = static_cast<double>(params.k);
  const double ms2 = params.mu_s * params.mu_s;
  const double norm2 = params.mu_l * params.mu_l + ms2;
  const double base = aggregation_coefficient(params.h, params.d);
  return 2.0 * params.d * ms2 * k / (base * (params.lambda_reg + norm2 * n));
}

TheoryResult monte_carlo_gap(const TheoryParams& params, std::size_t trials, std::uint64_t seed) {
  validate(params);
  require_regular(params);
  if (trials == 0) throw Error("monte_carlo_gap: trials must be positive");
  const double ridge = aggregated_ridge(params);

  TheoryResult out;
  out.trials = trials;
  out.closed_form_gap = expected_logit_gap(params);
  out.composed_gap = params.lambda_reg > 0.0 ? composed_logit_gap(params) : out.closed_form_gap;

  // Welford running mean and variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(detail::derive_seed(seed, t));
    NormalEquations eq;
    for (std::size_t i = 0; i < params.n; ++i) {
      const bool group_zero = i < params.k;
      const double p = draw(rng, params.mu_l, params.sigma_l);
      const double q = draw(rng, params.mu_s, params.sigma_s);
      eq.add(training_row(params, group_zero, p, q), group_zero ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0});
    }
    const Mat2 w = eq.solve(ridge);
    const double pu = draw(rng, params.mu_l, params.sigma_l);
    const double qu = draw(rng, params.mu_s, params.sigma_s);
    const double pv = draw(rng, params.mu_l, params.sigma_l);
    const double qv = draw(rng, params.mu_s, params.sigma_s);
    const double gap = (test_row(params, 0, pu, qu) * w)[0] - (test_row(params, 1, pv, qv) * w)[0];

    const double delta = gap - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (gap - mean);
  }
  out.mc_gap_mean = mean;
  out.mc_gap_stderr =
      trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
  return out;
}

SweepResult sweep_alpha(const TheoryParams& params, std::span<const double> alpha_grid,
                        std::size_t trials, std::uint64_t seed) {
  SweepResult out;
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    const double alpha = alpha_grid[i];
    const double shifted = params.h + alpha;
    if (!(shifted >= 0.0 && shifted <= 1.0)) {
      out.skipped.push_back(alpha);
      continue;
    }
    TheoryParams p = params;
    p.alpha_shift = alpha;
    SweepRow row;
    row.alpha = alpha;
    row.closed_form = expected_logit_gap(p);
    row.composed = p.lambda_reg > 0.0 ? composed_logit_gap(p) : row.closed_form;
    if (trials > 0) {
      const TheoryResult mc = monte_carlo_gap(p, trials, detail::derive_seed(seed, i));
      row.mc_mean = mc.mc_gap_mean;
      row.mc_stderr = mc.mc_gap_stderr;
      row.trials = mc.trials;
    }
    out.rows.push_back(row);
  }
  return out;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  using detail::format_double;
  out << "alpha,closed_form,mc_mean,mc_stderr,trials\n";
  for (const SweepRow& r : sweep.rows) {
    out << format_double(r.alpha) << ',' << format_double(r.closed_form) << ','
        << format_double(r.mc_mean) << ',' << format_double(r.mc_stderr) << ',' << r.trials << '\n';
  }
}

}  // namespace hetfair::theory
