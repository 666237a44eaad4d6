#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "stable_sde/counterexample.hpp"
#include "stable_sde/error.hpp"
#include "stable_sde/random.hpp"

using namespace stable_sde;

TEST(RunCounterexample, StructureAndInvariants) {
  for (int i = 0; i < 50; ++i) {
    Rng rng(derive_seed(1, i, StreamTag::driver));
    const auto run = run_counterexample(0.5, 0.5, 4.0, 200, rng);
    const auto z = run.driver().values();
    ASSERT_EQ(run.driver().steps(), 800u);
    for (std::size_t k = 1; k < z.size(); ++k) ASSERT_GT(z[k], 0.0);

    const auto& clock = run.clock();
    EXPECT_EQ(clock.breakpoints().size(), z.size());
    EXPECT_NEAR(clock.values()[1], run.head_correction(), 1e-15 * run.head_correction());
    for (std::size_t k = 1; k < clock.values().size(); ++k) {
      ASSERT_GT(clock.values()[k], clock.values()[k - 1]);
    }

    // γ is the right inverse of B and non-decreasing.
    double prev = 0.0;
    for (double t = 0.0; t < clock.total(); t += clock.total() / 97.0) {
      const auto g = run.gamma(t);
      ASSERT_TRUE(g.has_value());
      ASSERT_GE(*g, prev);
      prev = *g;
      ASSERT_NEAR(clock(*g), t, 1e-9);
    }
    EXPECT_FALSE(run.gamma(clock.total()).has_value());

    // X = Z∘γ is positive once γ passes the first grid point.
    for (double t : {0.5, 1.0}) {
      if (!run.covers(t)) continue;
      const auto x = run.x_at(t);
      ASSERT_TRUE(x.has_value());
      if (*run.gamma(t) >= clock.breakpoints()[1]) {
        EXPECT_GT(*x, 0.0);
      }
    }
    EXPECT_LE(run.two_way_residual(), 1e-12);
    EXPECT_EQ(run.y().front(), 0.0);
  }
}

TEST(RunCounterexample, RejectsBadParameters) {
  Rng rng(1);
  EXPECT_THROW(run_counterexample(0.5, 1.0, 1.0, 100, rng), InvalidArgument);
  EXPECT_THROW(run_counterexample(0.5, 0.0, 1.0, 100, rng), InvalidArgument);
  EXPECT_THROW(run_counterexample(1.0, 0.5, 1.0, 100, rng), InvalidArgument);
  EXPECT_THROW(run_counterexample(0.5, 0.5, 1.0, 99, rng), InvalidArgument);
  EXPECT_THROW(run_counterexample(0.5, 0.5, 0.0, 100, rng), InvalidArgument);
}

TEST(RunCounterexample, ClockSamplerDrawsTheSameVariates) {
  for (int i = 0; i < 20; ++i) {
    const auto seed = derive_seed(2, i, StreamTag::driver);
    Rng a(seed);
    Rng b(seed);
    const auto run = run_counterexample(0.5, 0.5, 2.0, 500, a);
    const auto total = sample_clock_total(0.5, 0.5, 2.0, 1000, b);
    EXPECT_NEAR(run.clock().total(), total.total, 1e-12 * total.total);
    EXPECT_NEAR(run.head_correction(), total.head_correction, 1e-12 * total.head_correction);
    const auto sub = clock_total_on_subgrid(0.5, 0.5, run.driver(), 1);
    EXPECT_NEAR(sub.total, total.total, 1e-12 * total.total);
  }
}

TEST(RunCounterexample, HeadCorrectionConsistency) {
  // Halving the step moves B_1 by less than the head correction in >= 95% of runs.
  const int n = 400;
  int within = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(3, i, StreamTag::driver));
    const auto run = run_counterexample(0.5, 0.5, 1.0, 2000, rng);
    const auto fine = clock_total_on_subgrid(0.5, 0.5, run.driver(), 1);
    const auto coarse = clock_total_on_subgrid(0.5, 0.5, run.driver(), 2);
    within += std::abs(fine.total - coarse.total) < coarse.head_correction ? 1 : 0;
  }
  EXPECT_GE(within, static_cast<int>(0.95 * n)) << within << " of " << n;
}

TEST(RunCounterexample, FiniteAsGridRefines) {
  for (int i = 0; i < 20; ++i) {
    Rng rng(derive_seed(4, i, StreamTag::driver));
    const auto run = run_counterexample(0.5, 0.5, 1.0, 8000, rng);
    for (std::size_t stride : {1u, 2u, 4u, 8u, 16u}) {
      const auto b = clock_total_on_subgrid(0.5, 0.5, run.driver(), stride);
      ASSERT_TRUE(std::isfinite(b.total));
      ASSERT_GT(b.total, 0.0);
    }
  }
}

TEST(ScalingLaw, ReportsExponentAndPasses) {
  const auto r = scaling_law_check(0.5, 0.5, 1.0, 2.0, 1000, 1000, {11, 1});
  EXPECT_EQ(r.exponent, 0.5);
  EXPECT_EQ(r.n, 1000u);
  EXPECT_GT(r.ks.p_value, 0.01);
  const auto near_one = scaling_law_check(0.5, 0.99, 1.0, 2.0, 1000, 200, {12, 1});
  EXPECT_NEAR(near_one.exponent, 0.01, 1e-15);
  EXPECT_GT(near_one.ks.p_value, 0.01);
}

TEST(ScalingLaw, EqualTimesGiveSmallStatistic) {
  const auto r = scaling_law_check(0.5, 0.5, 1.0, 1.0, 1000, 200, {13, 1});
  EXPECT_LT(r.ks.statistic, 0.08);
  EXPECT_THROW(scaling_law_check(0.5, 0.5, 2.0, 1.0, 1000, 200, {13, 1}), InvalidArgument);
  EXPECT_THROW(scaling_law_check(0.5, 0.5, 1.0, 2.0, 999, 200, {13, 1}), InvalidArgument);
}

TEST(Divergence, LimitsAndTrend) {
  const std::vector<double> times{1.0, 10.0, 100.0};
  const auto zero = divergence_check(0.5, 0.5, times, 0.0, 500, 100, {1, 1});
  for (const auto& p : zero.points) EXPECT_EQ(p.probability, 0.0);
  const auto huge = divergence_check(0.5, 0.5, {1.0}, 1e12, 500, 100, {1, 1});
  EXPECT_EQ(huge.points[0].probability, 1.0);

  const auto r = divergence_check(0.5, 0.5, times, 5.0, 2000, 200, {2, 1});
  EXPECT_TRUE(r.strictly_decreasing);
  EXPECT_TRUE(r.non_increasing);
  EXPECT_EQ(r.points.size(), 3u);
  EXPECT_THROW(divergence_check(0.5, 0.5, {2.0, 1.0}, 5.0, 10, 100, {}), InvalidArgument);
}

TEST(VLaw, NearlyConstantPhiLimit) {
  // β → 0: φ ≈ 1 away from 0, so V ≈ Z.
  const auto r = v_law_check(0.5, 0.01, 2.0, 1000, 500, {21, 1});
  EXPECT_GT(r.ks.p_value, 0.01);
  EXPECT_GE(r.coverage, 0.8);
  EXPECT_FALSE(r.inconclusive);
}

TEST(VLaw, ShortHorizonIsInconclusive) {
  const auto r = v_law_check(0.5, 0.5, 0.01, 1000, 10000, {22, 1});
  EXPECT_LT(r.coverage, 0.5);
  EXPECT_TRUE(r.inconclusive);
  EXPECT_EQ(r.n, 1000u);
}

TEST(Nonuniqueness, ZeroSolutionAndPositiveSolution) {
  const auto r = nonuniqueness_demo(0.5, 0.5, 4.0, 300, 500, {31, 1});
  EXPECT_EQ(r.zero_residual, 0.0);
  EXPECT_GE(r.fraction_positive, 0.99);
  EXPECT_GE(r.coverage, 0.8);
  EXPECT_LE(r.max_two_way_residual, 1e-12);
}

TEST(Counterexample, ResultsIndependentOfThreadCount) {
  const auto a = nonuniqueness_demo(0.5, 0.5, 2.0, 50, 200, {41, 1});
  const auto b = nonuniqueness_demo(0.5, 0.5, 2.0, 50, 200, {41, 3});
  EXPECT_EQ(a.fraction_positive, b.fraction_positive);
  EXPECT_EQ(a.coverage, b.coverage);
  EXPECT_EQ(a.max_two_way_residual, b.max_two_way_residual);
}

TEST(Counterexample, ReportCsv) {
  std::ostringstream out;
  write_report_csv(out, {{"v_law", 0.02, 0.5, 0.99, 2000, 0.5, 0.5, 10000, 7}});
  EXPECT_EQ(out.str(),
            "check,statistic,p_value,coverage,n,alpha,beta,grid_m,seed\n"
            "v_law,0.02,0.5,0.98999999999999999,2000,0.5,0.5,10000,7\n");
}
