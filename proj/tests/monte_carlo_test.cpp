#include "ldgof/monte_carlo.hpp"

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "ldgof/error.hpp"
#include "ldgof/exact_oracle.hpp"

namespace ldgof {
namespace {

TEST(StreamEngine, DeterministicAndDistinct) {
  StreamEngine a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a();
    EXPECT_EQ(va, b());
    differs_c |= va != c();
    differs_d |= va != d();
  }
  EXPECT_TRUE(differs_c);
  EXPECT_TRUE(differs_d);
}

TEST(SampleMultinomial, CountsSumToSampleSize) {
  StreamEngine engine(1, 0);
  const auto probs = ProbabilityVector::from_doubles({1e-9, 0.3, 0.2, 0.5 - 1e-9});
  for (std::uint64_t n : {0u, 1u, 17u, 100000u}) {
    for (int i = 0; i < 50; ++i) {
      const auto counts = sample_multinomial(n, probs, engine);
      EXPECT_EQ(counts.size(), 4u);
      EXPECT_EQ(counts.sample_size(), n);
    }
  }
}

TEST(SampleMultinomial, CellMeansWithinFourStandardErrors) {
  StreamEngine engine(2024, 0);
  const auto probs = ProbabilityVector::equiprobable(10);
  const int draws = 10000;
  std::vector<double> sums(10, 0.0);
  for (int i = 0; i < draws; ++i) {
    const auto counts = sample_multinomial(10000, probs, engine);
    for (std::size_t m = 0; m < 10; ++m) sums[m] += static_cast<double>(counts[m]);
  }
  const double se = std::sqrt(10000.0 * 0.1 * 0.9 / draws);
  for (double s : sums) EXPECT_NEAR(s / draws, 1000.0, 4.0 * se);
}

SimulationConfig base_config() {
  SimulationConfig config;
  config.n = 200;
  config.probs = ProbabilityVector::equiprobable(40);
  config.replications = 5000;
  config.x_grid = {0.0, 1.0, 2.0};
  config.seed = 99;
  return config;
}

TEST(EstimateTail, IndependentOfPartitionCount) {
  auto config = base_config();
  config.kind = StatisticKind::likelihood_ratio;
  const auto one = estimate_tail(config);
  for (unsigned parts : {2u, 3u, 7u}) {
    config.partitions = parts;
    const auto many = estimate_tail(config);
    ASSERT_EQ(many.rows.size(), one.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
      EXPECT_EQ(many.rows[i].exceedances, one.rows[i].exceedances);
      EXPECT_EQ(many.rows[i].p_hat, one.rows[i].p_hat);
    }
  }
}

TEST(EstimateTail, RowInvariants) {
  const auto result = estimate_tail(base_config());
  ASSERT_EQ(result.rows.size(), 3u);
  for (const auto& row : result.rows) {
    EXPECT_GE(row.p_hat, 0.0);
    EXPECT_LE(row.p_hat, 1.0);
    EXPECT_DOUBLE_EQ(row.se, std::sqrt(row.p_hat * (1.0 - row.p_hat) / 5000.0));
    EXPECT_LE(row.wilson_lo, row.p_hat);
    EXPECT_GE(row.wilson_hi, row.p_hat);
    EXPECT_DOUBLE_EQ(row.ratio, row.p_hat / row.p_theory);
  }
  EXPECT_GE(result.rows[0].exceedances, result.rows[1].exceedances);
  EXPECT_GE(result.rows[1].exceedances, result.rows[2].exceedances);
}

TEST(EstimateTail, MedianNearHalf) {
  SimulationConfig config;
  config.n = 1000;
  config.probs = ProbabilityVector::equiprobable(200);
  config.replications = 20000;
  config.x_grid = {0.0};
  config.seed = 8;
  config.centering = Centering::cells_minus_one;
  const auto row = estimate_tail(config).rows[0];
  // Right skew puts the median about 2/3 below the mean of a chi-square
  // with 199 degrees of freedom, i.e. about 0.013 of probability.
  EXPECT_NEAR(row.p_hat, 0.5 - 0.0133, 4.0 * row.se);
}

TEST(EstimateTail, ChiSquareModerateScale) {
  SimulationConfig config;
  config.n = 1000;
  config.probs = ProbabilityVector::equiprobable(200);
  config.replications = 20000;
  config.x_grid = {1.0};
  config.seed = 5;
  const auto row = estimate_tail(config).rows[0];
  EXPECT_NEAR(row.p_theory, 0.158655, 1e-6);
  EXPECT_GT(row.ratio, 0.8);
  EXPECT_LT(row.ratio, 1.2);
}

TEST(EstimateTail, Refusals) {
  auto config = base_config();
  config.replications = 100;
  EXPECT_THROW(estimate_tail(config), RangeError);
  config.replications = 1000;
  config.x_grid = {};
  EXPECT_THROW(estimate_tail(config), RangeError);
  config.x_grid = {2.0, 1.0};
  EXPECT_THROW(estimate_tail(config), RangeError);
  config.x_grid = {-1.0};
  EXPECT_THROW(estimate_tail(config), RangeError);
  config.x_grid = {1.0};
  config.partitions = 0;
  EXPECT_THROW(estimate_tail(config), RangeError);
  config.partitions = 1;
  config.budget = 999;
  try {
    estimate_tail(config);
    FAIL() << "expected a budget refusal";
  } catch (const BudgetError& e) {
    EXPECT_NE(std::string(e.what()).find("1000"), std::string::npos);
  }
}

TEST(WilsonInterval, Examples) {
  const auto half = wilson_interval(50, 100);
  EXPECT_NEAR(half.lo, 0.4038315, 1e-6);
  EXPECT_NEAR(half.hi, 0.5961685, 1e-6);
  const auto none = wilson_interval(0, 1000);
  EXPECT_NEAR(none.lo, 0.0, 1e-15);
  EXPECT_GT(none.hi, 0.0);
  EXPECT_THROW(wilson_interval(0, 0), RangeError);
}

// N = 2, n = 4 equiprobable: chi-square takes 0, 1, 4 and the standardized
// value exceeds 0 exactly when it equals 4, with probability 1/8. N = 3,
// n = 6 equiprobable gives a second instance with an irregular support.
TEST(EstimateTail, AgreesWithExactOracle) {
  struct Instance {
    std::size_t cells;
    std::uint64_t n;
    double x;
  };
  for (const auto& inst : {Instance{2, 4, 0.0}, Instance{3, 6, 0.3}, Instance{4, 8, 0.9}}) {
    const auto probs = ProbabilityVector::equiprobable(inst.cells);
    const auto profile = chi_square_profile(probs, inst.n);
    const double t = static_cast<double>(inst.cells) + inst.x * std::sqrt(profile.variance);
    // Nudge the threshold off the support so > and >= agree.
    const double exact = exact_tail(inst.n, probs, StatisticKind::chi_square, std::nextafter(t, 1e300));
    int covered = 0;
    int close = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      SimulationConfig config;
      config.n = inst.n;
      config.probs = probs;
      config.replications = 1000;
      config.x_grid = {inst.x};
      config.seed = 1000 + seed;
      const auto row = estimate_tail(config).rows[0];
      covered += row.wilson_lo <= exact && exact <= row.wilson_hi;
      close += std::abs(row.p_hat - exact) <= 4.0 * row.se;
    }
    EXPECT_GE(covered, 93) << "cells " << inst.cells << " exact " << exact;
    EXPECT_GE(close, 95) << "cells " << inst.cells << " exact " << exact;
  }
}

TEST(ConvergenceStudy, SinglePointMatchesEstimate) {
  auto config = base_config();
  const std::vector<std::size_t> grid{40};
  const auto study = convergence_study(config, grid, 5.0);
  ASSERT_EQ(study.size(), 1u);
  const auto direct = estimate_tail(config);
  for (std::size_t i = 0; i < direct.rows.size(); ++i) {
    EXPECT_EQ(study[0].rows[i].exceedances, direct.rows[i].exceedances);
  }
  EXPECT_THROW(convergence_study(config, std::vector<std::size_t>{}, 5.0), RangeError);
  EXPECT_THROW(convergence_study(config, grid, 0.0), RangeError);
}

TEST(ConvergenceStudy, CsvRows) {
  SimulationConfig config;
  config.replications = 2000;
  config.x_grid = {1.5};
  config.seed = 17;
  const std::vector<std::size_t> grid{50, 100, 200, 400};
  const auto study = convergence_study(config, grid, 5.0);
  ASSERT_EQ(study.size(), 4u);
  EXPECT_EQ(study[3].n, 2000u);
  std::ostringstream out;
  write_simulation_csv(out, study);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "kind,N,n,x,p_theory,p_hat,se,wilson_lo,wilson_hi,ratio,reps,seed");
  int rows = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(line.rfind("chi2,", 0), 0u);
    ++rows;
  }
  EXPECT_EQ(rows, 4);
  const auto j = to_json(study[0]);
  EXPECT_EQ(j["N"], 50);
  EXPECT_EQ(j["rows"].size(), 1u);
}

}  // namespace
}  // namespace ldgof
