#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stable_sde {

/// Sorted, NaN-free sample with provenance.
class SampleSet {
 public:
  /// Throws InvalidArgument on NaN. Values are stored sorted.
  explicit SampleSet(std::vector<double> values, std::string label = {},
                     std::uint64_t seed = 0);

  std::span<const double> sorted() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const std::string& label() const noexcept { return label_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::vector<double> values_;
  std::string label_;
  std::uint64_t seed_;
};

struct KSReport {
  double statistic = 0.0;  // D = sup |F_n - G_m|
  double p_value = 1.0;    // asymptotic Kolmogorov tail at sqrt(nm/(n+m))·D
  std::size_t n = 0;
  std::size_t m = 0;
};

/// Two-sample Kolmogorov–Smirnov test. Exact D by a merged sweep that
/// consumes all copies of a tied value before measuring the gap.
KSReport ks_two_sample(const SampleSet& a, const SampleSet& b);

/// Q_KS(λ) = 2 Σ_{k>=1} (-1)^{k-1} exp(-2k²λ²), the Kolmogorov survival function.
double kolmogorov_survival(double lambda);

/// Right-continuous empirical CDF: #{v <= x} / n.
double ecdf_eval(const SampleSet& s, double x);

struct Interval {
  double lo;
  double hi;
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  double half_width() const noexcept { return 0.5 * (hi - lo); }
};

/// mean ± k·sqrt(var/n). Throws on n == 0.
Interval mc_band(double mean, double var, std::size_t n, double k_sigmas);

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t n = 0;
};

/// Welford, in index order.
MeanVar mean_variance(std::span<const double> values);

/// Median of a copy (average of the middle pair for even sizes).
double median(std::vector<double> values);

}  // namespace stable_sde
