#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace hetfair::theory {

/// Linear one-layer GNN model trained on k nodes with y = s = 0 and n - k
/// nodes with y = s = 1. Every node has degree d and homophily h; test nodes
/// sit at homophily h + alpha_shift. Label and sensitive features are
/// N(mu_l, sigma_l) and N(mu_s, sigma_s), negated for class/group 0.
struct TheoryParams {
  std::size_t n = 1000;
  std::size_t k = 500;
  double d = 10.0;
  double h = 0.7;
  double alpha_shift = 0.0;
  double mu_l = 1.0;
  double mu_s = 1.0;
  double sigma_l = 0.01;
  double sigma_s = 0.01;
  double lambda_reg = 1e-3;

  void set_sigma(double sigma) { sigma_l = sigma_s = sigma; }
};

/// Throws hetfair::Error when the parameters are outside the model's domain.
/// Does not check lambda_reg > 0; the operations that need it do.
void validate(const TheoryParams& params);

/// 1 + d(2h - 1): scale of an aggregated representation relative to the
/// node's own features.
double aggregation_coefficient(double h, double d);

using Vec2 = std::array<double, 2>;

struct Mat2 {
  std::array<std::array<double, 2>, 2> m{};

  double operator()(std::size_t r, std::size_t c) const { return m[r][c]; }
  double& operator()(std::size_t r, std::size_t c) { return m[r][c]; }
  double determinant() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  Mat2 inverse() const;
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
};

/// Row vector times matrix.
Vec2 operator*(const Vec2& row, const Mat2& w);

/// Aggregated training representations R (n x 2) and one-hot targets Y (n x 2).
struct TrainingSample {
  std::vector<Vec2> representations;
  std::vector<Vec2> targets;
};

/// Draws R and Y. Row i uses its own draw [p_i, q_i]:
/// r = (1 + h d) x + (1 - h) d x_opposite, x = -[p, q] for the first k rows
/// and +[p, q] for the rest.
TrainingSample sample_training_representations(const TheoryParams& params, std::mt19937_64& rng);

/// W = (R^T R + ridge I)^{-1} R^T Y. Throws when the system is numerically singular.
Mat2 fit_ridge_weights(std::span<const Vec2> representations, std::span<const Vec2> targets,
                       double ridge);

/// Ridge used on R^T R so that the fit matches a Tikhonov term lambda on the
/// un-aggregated feature Gram matrix: lambda * (1 + d(2h - 1))^2.
double aggregated_ridge(const TheoryParams& params);

/// Closed-form expected weight matrix
/// (2dh - d + 1)^{-1} (Gbar^T Gbar + lambda I)^{-1} Gbar^T D Y.
/// Requires lambda_reg > 0 and 2dh - d + 1 != 0.
Mat2 expected_weights(const TheoryParams& params);

/// Expected aggregated representation of a y = 0 test node at homophily
/// h + alpha_shift with the given sensitive attribute.
Vec2 expected_test_representation(const TheoryParams& params, int sensitive);

/// Published closed form for the expected correct-class logit gap between
/// the s = 0 and s = 1 test nodes:
///   mu_s^2 k (1 + d(2h + 2 alpha - 1)) / ((1 + d(2h - 1)) (lambda + (mu_l^2 + mu_s^2) n)).
/// lambda_reg = 0 gives the unregularized statement.
double expected_logit_gap(const TheoryParams& params);

/// The same gap evaluated by composing expected_test_representation with
/// expected_weights. Requires lambda_reg > 0.
double composed_logit_gap(const TheoryParams& params);

/// d/d(alpha) of expected_logit_gap.
double expected_gap_slope(const TheoryParams& params);

struct TheoryResult {
  double closed_form_gap = 0.0;
  double composed_gap = 0.0;
  double mc_gap_mean = 0.0;
  double mc_gap_stderr = 0.0;
  std::size_t trials = 0;
};

/// Per trial: sample R and Y, fit W by ridge regression, sample one s = 0 and
/// one s = 1 test representation and record (r_u W)_0 - (r_v W)_0. Trial t
/// draws from its own stream derived from `seed`, so results do not depend on
/// evaluation order.
TheoryResult monte_carlo_gap(const TheoryParams& params, std::size_t trials, std::uint64_t seed);

struct SweepRow {
  double alpha = 0.0;
  double closed_form = 0.0;
  double composed = 0.0;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  std::size_t trials = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<double> skipped;  ///< grid points with h + alpha outside [0, 1]
};

/// Runs monte_carlo_gap (trials > 0) for each alpha in the grid. Row seeds
/// derive from `seed` and the row index.
SweepResult sweep_alpha(const TheoryParams& params, std::span<const double> alpha_grid,
                        std::size_t trials, std::uint64_t seed);

/// `alpha,closed_form,mc_mean,mc_stderr,trials` rows.
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

}  // namespace hetfair::theory
