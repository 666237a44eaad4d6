#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "stable_sde/error.hpp"
#include "stable_sde/stats.hpp"

using namespace stable_sde;

namespace {

// sup |F - G| evaluated at every pooled point and between neighbours.
double brute_force_d(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> grid(a);
  grid.insert(grid.end(), b.begin(), b.end());
  std::sort(grid.begin(), grid.end());
  std::vector<double> probes(grid);
  for (std::size_t i = 1; i < grid.size(); ++i) probes.push_back(0.5 * (grid[i - 1] + grid[i]));
  probes.push_back(grid.front() - 1.0);
  probes.push_back(grid.back() + 1.0);
  const auto cdf = [](const std::vector<double>& s, double x) {
    return static_cast<double>(std::count_if(s.begin(), s.end(), [x](double v) { return v <= x; })) /
           static_cast<double>(s.size());
  };
  double d = 0.0;
  for (double x : probes) d = std::max(d, std::abs(cdf(a, x) - cdf(b, x)));
  return d;
}

// Alternating series, many terms; accurate for λ >= 0.3.
double survival_series(double lambda) {
  double s = 0.0;
  for (int k = 1; k <= 2000; ++k) {
    s += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return 2.0 * s;
}

}  // namespace

TEST(SampleSet, SortsAndRejectsNan) {
  const SampleSet s({3.0, 1.0, 2.0}, "x", 9);
  EXPECT_EQ(s.sorted()[0], 1.0);
  EXPECT_EQ(s.sorted()[2], 3.0);
  EXPECT_EQ(s.label(), "x");
  EXPECT_EQ(s.seed(), 9u);
  EXPECT_THROW(SampleSet({1.0, std::nan("")}), InvalidArgument);
}

TEST(KsTwoSample, Examples) {
  const SampleSet a({1.0, 2.0, 2.0, 5.0});
  EXPECT_EQ(ks_two_sample(a, SampleSet({5.0, 2.0, 1.0, 2.0})).statistic, 0.0);
  const auto r = ks_two_sample(SampleSet({0.0, 1.0}), SampleSet({0.5, 1.5}));
  EXPECT_EQ(r.statistic, 0.5);
  EXPECT_EQ(r.n, 2u);
  EXPECT_EQ(r.m, 2u);
  EXPECT_THROW(ks_two_sample(SampleSet({}), a), InvalidArgument);
}

TEST(KsTwoSample, ShiftedUniforms) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(1000), b(1000);
  for (auto& v : a) v = u(gen);
  for (auto& v : b) v = u(gen) + 0.5;
  const auto r = ks_two_sample(SampleSet(a), SampleSet(b));
  EXPECT_NEAR(r.statistic, 0.5, 0.06);
  EXPECT_LT(r.p_value, 1e-20);
}

TEST(KsTwoSample, MatchesBruteForceWithTies) {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<int> size(1, 50);
  std::uniform_int_distribution<int> val(0, 12);  // forces ties
  for (int k = 0; k < 2000; ++k) {
    std::vector<double> a(size(gen)), b(size(gen));
    for (auto& v : a) v = val(gen);
    for (auto& v : b) v = val(gen) + 0.5 * (k % 3 == 0);
    ASSERT_EQ(ks_two_sample(SampleSet(a), SampleSet(b)).statistic, brute_force_d(a, b));
  }
}

TEST(KsTwoSample, RankInvariance) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> val(-20, 20);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> a(40), b(35);
    for (auto& v : a) v = val(gen);
    for (auto& v : b) v = val(gen);
    const double d = ks_two_sample(SampleSet(a), SampleSet(b)).statistic;
    auto ta = a;
    auto tb = b;
    const auto f = [](double x) { return x * x * x + 7.0; };
    std::transform(ta.begin(), ta.end(), ta.begin(), f);
    std::transform(tb.begin(), tb.end(), tb.begin(), f);
    ASSERT_EQ(ks_two_sample(SampleSet(ta), SampleSet(tb)).statistic, d);
  }
}

TEST(KolmogorovSurvival, AgainstSeries) {
  for (double lambda = 0.3; lambda < 3.0; lambda += 0.01) {
    EXPECT_NEAR(kolmogorov_survival(lambda), survival_series(lambda), 1e-12) << lambda;
  }
  EXPECT_NEAR(kolmogorov_survival(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(kolmogorov_survival(1.6276), 0.01, 1e-4);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
  EXPECT_NEAR(kolmogorov_survival(0.05), 1.0, 1e-15);
}

TEST(KolmogorovSurvival, MonotoneAndBounded) {
  double prev = 1.0;
  for (double lambda = 0.0; lambda < 5.0; lambda += 0.001) {
    const double q = kolmogorov_survival(lambda);
    ASSERT_GE(q, 0.0);
    ASSERT_LE(q, 1.0);
    ASSERT_LE(q, prev + 1e-15);
    prev = q;
  }
}

TEST(KsTwoSample, PValueDecreasesInD) {
  // Fixed sizes, increasing separation.
  double prev = 2.0;
  for (int shift = 0; shift <= 10; ++shift) {
    std::vector<double> a, b;
    for (int i = 0; i < 100; ++i) {
      a.push_back(i);
      b.push_back(i + shift);
    }
    const auto r = ks_two_sample(SampleSet(a), SampleSet(b));
    ASSERT_LE(r.p_value, prev);
    prev = r.p_value;
  }
}

TEST(Ecdf, Examples) {
  const SampleSet s({1.0, 2.0, 3.0});
  EXPECT_EQ(ecdf_eval(s, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(ecdf_eval(s, 2.0), 2.0 / 3.0);
  EXPECT_EQ(ecdf_eval(s, 3.0), 1.0);
  EXPECT_EQ(ecdf_eval(s, 99.0), 1.0);
  EXPECT_THROW(ecdf_eval(SampleSet({}), 0.0), InvalidArgument);
}

TEST(McBand, Examples) {
  const auto band = mc_band(0.0, 1.0, 10000, 3.0);
  EXPECT_NEAR(band.half_width(), 0.03, 1e-15);
  EXPECT_TRUE(band.contains(0.029));
  EXPECT_FALSE(band.contains(0.031));
  EXPECT_THROW(mc_band(0.0, 1.0, 0, 3.0), InvalidArgument);
}

TEST(MeanVariance, AndMedian) {
  const std::vector<double> v{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  const auto mv = mean_variance(v);
  EXPECT_DOUBLE_EQ(mv.mean, 5.0);
  EXPECT_DOUBLE_EQ(mv.variance, 32.0 / 7.0);
  EXPECT_EQ(mv.n, 8u);
  EXPECT_EQ(median(v), 4.5);
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_THROW(median({}), InvalidArgument);
}
