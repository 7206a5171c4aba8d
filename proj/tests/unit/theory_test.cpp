#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hetfair/error.hpp"
#include "hetfair/theory.hpp"
#include "oracles.hpp"

using namespace hetfair;
using namespace hetfair::theory;

namespace {

TheoryParams reference() {
  TheoryParams p;
  p.alpha_shift = 0.2;
  return p;
}

}  // namespace

TEST(TrainingRepresentations, DeterministicLimits) {
  TheoryParams p;
  p.n = 6;
  p.k = 3;
  p.h = 1.0;
  p.mu_l = 1.5;
  p.mu_s = 0.5;
  p.set_sigma(0.0);
  std::mt19937_64 rng(1);
  const TrainingSample s = sample_training_representations(p, rng);
  ASSERT_EQ(s.representations.size(), 6u);
  EXPECT_DOUBLE_EQ(s.representations[0][0], -(1.0 + p.d) * 1.5);
  EXPECT_DOUBLE_EQ(s.representations[0][1], -(1.0 + p.d) * 0.5);
  EXPECT_DOUBLE_EQ(s.representations[5][0], (1.0 + p.d) * 1.5);
  EXPECT_EQ(s.targets[0], (Vec2{1.0, 0.0}));
  EXPECT_EQ(s.targets[5], (Vec2{0.0, 1.0}));

  p.h = 0.5;
  p.d = 2.0;
  const TrainingSample half = sample_training_representations(p, rng);
  EXPECT_DOUBLE_EQ(half.representations[1][0], -1.5);
  EXPECT_DOUBLE_EQ(half.representations[1][1], -0.5);
}

TEST(TrainingRepresentations, RowMeanMatchesDeterministicRow) {
  TheoryParams p;
  p.n = 100001;
  p.k = 100000;
  p.set_sigma(0.5);
  std::mt19937_64 rng(2);
  const TrainingSample s = sample_training_representations(p, rng);
  const double c = aggregation_coefficient(p.h, p.d);
  for (std::size_t j = 0; j < 2; ++j) {
    double mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.k; ++i) {
      mean += s.representations[i][j];
      sq += s.representations[i][j] * s.representations[i][j];
    }
    const double m = static_cast<double>(p.k);
    mean /= m;
    const double stderr_ = std::sqrt((sq / m - mean * mean) / m);
    EXPECT_NEAR(mean, -c * 1.0, 3.0 * stderr_);
  }
}

TEST(ExpectedWeights, HandExample) {
  TheoryParams p;
  p.n = 4;
  p.k = 2;
  p.mu_l = 1.0;
  p.mu_s = 0.0;
  p.lambda_reg = 1.0;
  p.d = 2.0;
  p.h = 1.0;
  const Mat2 w = expected_weights(p);
  EXPECT_NEAR(w(0, 0), -2.0 / 15.0, 1e-15);
  EXPECT_NEAR(w(0, 1), 2.0 / 15.0, 1e-15);
  EXPECT_EQ(w(1, 0), 0.0);
  EXPECT_EQ(w(1, 1), 0.0);
}

TEST(ExpectedWeights, Errors) {
  TheoryParams p;
  p.lambda_reg = 0.0;
  EXPECT_THROW(expected_weights(p), Error);
  p.lambda_reg = 1e-3;
  p.d = 2.0;
  p.h = 0.25;  // 1 + d(2h - 1) = 0
  EXPECT_THROW(expected_weights(p), Error);
}

TEST(ExpectedWeights, MatchesNoiselessRidgeFit) {
  for (const double h : {0.1, 0.5, 0.7, 1.0}) {
    TheoryParams p;
    p.h = h;
    p.mu_s = 0.7;
    p.lambda_reg = 2.0;
    p.set_sigma(0.0);
    std::mt19937_64 rng(3);
    const TrainingSample s = sample_training_representations(p, rng);
    const Mat2 fit = fit_ridge_weights(s.representations, s.targets, aggregated_ridge(p));
    const Mat2 expected = expected_weights(p);
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t c = 0; c < 2; ++c) {
        EXPECT_NEAR(fit(r, c), expected(r, c), 1e-10 * (1.0 + std::abs(expected(r, c))));
      }
    }
  }
}

TEST(ExpectedWeights, MatchesNoisyFitWithinTwoPercent) {
  TheoryParams p;
  p.n = 2000;
  p.k = 1000;
  p.mu_s = 0.5;
  p.lambda_reg = 100.0;  // the ridge has to dominate the n sigma^2 noise along the null direction of the mean
  std::mt19937_64 rng(4);
  const TrainingSample s = sample_training_representations(p, rng);
  const Mat2 fit = fit_ridge_weights(s.representations, s.targets, aggregated_ridge(p));
  const Mat2 expected = expected_weights(p);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(fit(r, c), expected(r, c), 0.02 * std::abs(expected(r, c)));
  }
}

TEST(LogitGap, Examples) {
  TheoryParams p = reference();
  p.lambda_reg = 0.0;
  EXPECT_NEAR(expected_logit_gap(p), 0.45, 1e-15);

  p.mu_s = 0.0;
  EXPECT_EQ(expected_logit_gap(p), 0.0);

  TheoryParams z;
  z.lambda_reg = 0.0;
  z.mu_l = 2.0;
  z.mu_s = 1.0;
  EXPECT_NEAR(expected_logit_gap(z), 1.0 * 500.0 / (1000.0 * 5.0), 1e-15);
}

TEST(LogitGap, AffineAndIncreasingInAlpha) {
  TheoryParams p = reference();
  std::vector<double> xs, ys;
  for (int i = -3; i <= 3; ++i) {
    p.alpha_shift = i / 10.0;
    xs.push_back(p.alpha_shift);
    ys.push_back(expected_logit_gap(p));
  }
  for (std::size_t i = 1; i < ys.size(); ++i) EXPECT_GT(ys[i], ys[i - 1]);
  const auto line = hetfair::testing::fit_line(xs, ys);
  EXPECT_GT(line.r2, 0.999999);
  const double slope = 2.0 * p.d * p.mu_s * p.mu_s * static_cast<double>(p.k) /
                       ((1.0 + p.d * (2.0 * p.h - 1.0)) * (p.lambda_reg + 2.0 * static_cast<double>(p.n)));
  EXPECT_NEAR(line.slope, slope, 1e-9);
  EXPECT_NEAR(expected_gap_slope(p), slope, 1e-12);
}

TEST(LogitGap, ZeroCrossingOfTheNumerator) {
  TheoryParams p = reference();
  p.alpha_shift = -(1.0 + p.d * (2.0 * p.h - 1.0)) / (2.0 * p.d);
  EXPECT_NEAR(expected_logit_gap(p), 0.0, 1e-15);
}

TEST(MonteCarlo, NoiselessTrialEqualsComposedGap) {
  TheoryParams p = reference();
  p.set_sigma(0.0);
  const TheoryResult r = monte_carlo_gap(p, 1, 5);
  EXPECT_NEAR(r.mc_gap_mean, composed_logit_gap(p), 1e-9);
  EXPECT_EQ(r.mc_gap_stderr, 0.0);
  EXPECT_EQ(r.closed_form_gap, expected_logit_gap(p));
}

TEST(MonteCarlo, AgreesWithComposedGapAtSmallNoise) {
  TheoryParams p = reference();
  p.n = 400;
  p.k = 200;
  const TheoryResult r = monte_carlo_gap(p, 2000, 6);
  EXPECT_EQ(r.trials, 2000u);
  EXPECT_GT(r.mc_gap_stderr, 0.0);
  EXPECT_NEAR(r.mc_gap_mean, r.composed_gap, 3.0 * r.mc_gap_stderr + 1e-3 * std::abs(r.composed_gap));
}

TEST(MonteCarlo, DeterministicAndRejectsZeroTrials) {
  const TheoryParams p = reference();
  const TheoryResult a = monte_carlo_gap(p, 50, 7);
  const TheoryResult b = monte_carlo_gap(p, 50, 7);
  EXPECT_EQ(a.mc_gap_mean, b.mc_gap_mean);
  EXPECT_EQ(a.mc_gap_stderr, b.mc_gap_stderr);
  EXPECT_THROW(monte_carlo_gap(p, 0, 7), Error);
}

TEST(Sweep, SingleZeroRowAndSkipping) {
  TheoryParams p;
  const std::vector<double> zero = {0.0};
  const SweepResult one = sweep_alpha(p, zero, 0, 1);
  ASSERT_EQ(one.rows.size(), 1u);
  EXPECT_EQ(one.rows[0].closed_form, expected_logit_gap(p));

  const std::vector<double> grid = {-0.8, -0.1, 0.0, 0.3, 0.4};  // h = 0.7
  const SweepResult s = sweep_alpha(p, grid, 0, 1);
  EXPECT_EQ(s.rows.size(), 3u);
  EXPECT_EQ(s.skipped, (std::vector<double>{-0.8, 0.4}));
}

TEST(Sweep, CsvHeader) {
  TheoryParams p;
  const std::vector<double> grid = {0.0, 0.1};
  std::ostringstream out;
  write_sweep_csv(sweep_alpha(p, grid, 0, 1), out);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("alpha,closed_form,mc_mean,mc_stderr,trials\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}
