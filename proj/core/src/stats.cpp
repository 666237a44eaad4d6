#include "stable_sde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stable_sde/error.hpp"

namespace stable_sde {

SampleSet::SampleSet(std::vector<double> values, std::string label, std::uint64_t seed)
    : values_(std::move(values)), label_(std::move(label)), seed_(seed) {
  for (const double v : values_) {
    if (std::isnan(v)) throw InvalidArgument("SampleSet '" + label_ + "': NaN value");
  }
  std::sort(values_.begin(), values_.end());
}

KSReport ks_two_sample(const SampleSet& a, const SampleSet& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample: empty sample");
  const auto x = a.sorted();
  const auto y = b.sorted();
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  // Once one sample is exhausted the gap only shrinks toward 0.
  KSReport r;
  r.statistic = d;
  r.n = x.size();
  r.m = y.size();
  const double ne = n * m / (n + m);
  r.p_value = kolmogorov_survival(std::sqrt(ne) * d);
  return r;
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-theta form converges fast for small λ:
    // 1 - Q = sqrt(2π)/λ Σ_{k>=1} exp(-(2k-1)²π²/(8λ²)).
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double w = pi2 / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      s += std::exp(-odd * odd * w);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double ecdf_eval(const SampleSet& s, double x) {
  if (s.empty()) throw InvalidArgument("ecdf_eval: empty sample");
  const auto v = s.sorted();
  const auto it = std::upper_bound(v.begin(), v.end(), x);
  return static_cast<double>(it - v.begin()) / static_cast<double>(v.size());
}

Interval mc_band(double mean, double var, std::size_t n, double k_sigmas) {
  if (n == 0) throw InvalidArgument("mc_band: n must be positive");
  if (!(var >= 0.0)) throw InvalidArgument("mc_band: variance must be non-negative");
  const double hw = k_sigmas * std::sqrt(var / static_cast<double>(n));
  return {mean - hw, mean + hw};
}

MeanVar mean_variance(std::span<const double> values) {
  MeanVar r;
  double m2 = 0.0;
  for (const double v : values) {
    ++r.n;
    const double delta = v - r.mean;
    r.mean += delta / static_cast<double>(r.n);
    m2 += delta * (v - r.mean);
  }
  r.variance = r.n > 1 ? m2 / static_cast<double>(r.n - 1) : 0.0;
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median: empty input");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace stable_sde
