#include "stable_sde/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "stable_sde/csv.hpp"
#include "stable_sde/error.hpp"
#include "stable_sde/parallel.hpp"
#include "stable_sde/phi.hpp"

namespace stable_sde {

namespace {

constexpr std::size_t kHeadFitPoints = 10;
constexpr std::size_t kMinGridM = 100;
constexpr std::size_t kMinReplicates = 1000;

void require_exponents(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("counterexample: alpha must lie in (0,1)");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidArgument("counterexample: beta must lie in (0,1); the scaling argument "
                          "degenerates otherwise");
  }
}

std::size_t steps_for(double horizon, std::size_t grid_m) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("counterexample: horizon must be positive and finite");
  }
  if (grid_m < kMinGridM) throw InvalidArgument("counterexample: grid_m must be >= 100");
  const auto steps = static_cast<std::size_t>(std::llround(horizon * static_cast<double>(grid_m)));
  return std::max<std::size_t>(steps, kHeadFitPoints);
}

void require_positive_grid_value(double z, std::size_t k) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw SamplerIntegrityError("counterexample: driver value " + csv::format_real(z) +
                                " at grid index " + std::to_string(k) +
                                " is not positive and finite");
  }
}

// Accumulates κ for the head model f(s) ≈ κ·s^{-β} over the first grid points.
class HeadFit {
 public:
  HeadFit(double beta, double step) : beta_(beta), step_(step) {}

  void add(std::size_t k, double integrand) {
    if (k == 0 || k > kHeadFitPoints) return;
    sum_ += integrand * std::pow(static_cast<double>(k) * step_, beta_);
    ++count_;
  }

  /// ∫_0^{s_1} κ s^{-β} ds = κ·s_1^{1-β}/(1-β).
  double head() const {
    const double kappa = sum_ / static_cast<double>(count_);
    return kappa * std::pow(step_, 1.0 - beta_) / (1.0 - beta_);
  }

 private:
  double beta_;
  double step_;
  double sum_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace

CounterexampleRun::CounterexampleRun(double alpha, double beta, GridPath driver, Clock clock,
                                     double head_correction, std::vector<double> y,
                                     double two_way_residual)
    : alpha_(alpha),
      beta_(beta),
      driver_(std::move(driver)),
      clock_(std::move(clock)),
      head_correction_(head_correction),
      y_(std::move(y)),
      two_way_residual_(two_way_residual) {}

std::size_t CounterexampleRun::grid_index(double s) const {
  const auto bp = clock_.breakpoints();
  const auto it = std::upper_bound(bp.begin(), bp.end(), s);
  return static_cast<std::size_t>(it - bp.begin()) - 1;
}

std::optional<double> CounterexampleRun::x_at(double t) const {
  const auto g = gamma(t);
  if (!g) return std::nullopt;
  return driver_.values()[grid_index(*g)];
}

std::optional<double> CounterexampleRun::v_at(double t) const {
  const auto g = gamma(t);
  if (!g) return std::nullopt;
  return y_[grid_index(*g)];
}

CounterexampleRun run_counterexample(double alpha, double beta, double horizon,
                                     std::size_t grid_m, Rng& rng) {
  require_exponents(alpha, beta);
  const std::size_t steps = steps_for(horizon, grid_m);
  auto grid = sample_grid_path(StableParams::normalized(alpha), horizon, steps, rng);
  const auto z = grid.values();
  const double h = grid.step();

  std::vector<double> breakpoints(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) breakpoints[k] = grid.time(k);

  // Clock slopes Z_{s_k}^{-αβ} and Y increments Z_{s_k}^{-β}·ΔZ for k >= 1.
  std::vector<double> slopes(steps);
  std::vector<double> dy(steps + 1, 0.0);
  HeadFit fit(beta, h);
  for (std::size_t k = 1; k <= steps; ++k) {
    require_positive_grid_value(z[k], k);
    const double log_z = std::log(z[k]);
    const double integrand = std::exp(-alpha * beta * log_z);
    fit.add(k, integrand);
    if (k < steps) {
      slopes[k] = integrand;
      dy[k + 1] = std::exp(-beta * log_z) * (z[k + 1] - z[k]);
    }
  }
  const double head = fit.head();
  slopes[0] = head / breakpoints[1];

  // Y on [0, s_1]: the continuous-path value ∫_0^{Z_{s_1}} u^{-β} du.
  dy[1] = std::pow(z[1], 1.0 - beta) / (1.0 - beta);
  std::vector<double> y(steps + 1, 0.0);
  for (std::size_t k = 1; k <= steps; ++k) y[k] = y[k - 1] + dy[k];

  // Event-wise solve of dX = φ(X⁻) dV along the grid, started at Z_{s_1}.
  // Uses the increments directly; differencing the running sum loses digits.
  const auto phi = MonotonePhi::power(beta);
  double x = z[1];
  double residual = 0.0;
  for (std::size_t k = 1; k < steps; ++k) {
    x += eval(phi, x) * dy[k + 1];
    residual = std::max(residual, std::abs(x - z[k + 1]) / z[k + 1]);
  }

  Clock clock(std::move(breakpoints), std::move(slopes));
  return CounterexampleRun(alpha, beta, std::move(grid), std::move(clock), head, std::move(y),
                           residual);
}

ClockSample sample_clock_total(double alpha, double beta, double horizon, std::size_t steps,
                               Rng& rng) {
  require_exponents(alpha, beta);
  if (steps < kHeadFitPoints) throw InvalidArgument("sample_clock_total: need >= 10 steps");
  const ExactIncrementSampler draw(StableParams::normalized(alpha),
                                   horizon / static_cast<double>(steps));
  const double h = horizon / static_cast<double>(steps);
  HeadFit fit(beta, h);
  double z = 0.0;
  double sum = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    z += draw(rng);
    require_positive_grid_value(z, k);
    const double integrand = std::pow(z, -alpha * beta);
    fit.add(k, integrand);
    if (k < steps) sum += integrand;
  }
  const double head = fit.head();
  return {head + sum * h, head};
}

ClockSample clock_total_on_subgrid(double alpha, double beta, const GridPath& driver,
                                   std::size_t stride) {
  require_exponents(alpha, beta);
  if (stride == 0 || driver.steps() % stride != 0) {
    throw InvalidArgument("clock_total_on_subgrid: stride must divide the step count");
  }
  const std::size_t steps = driver.steps() / stride;
  if (steps < kHeadFitPoints) throw InvalidArgument("clock_total_on_subgrid: too few steps");
  const double h = driver.step() * static_cast<double>(stride);
  const auto z = driver.values();
  HeadFit fit(beta, h);
  double sum = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double zk = z[k * stride];
    require_positive_grid_value(zk, k * stride);
    const double integrand = std::pow(zk, -alpha * beta);
    fit.add(k, integrand);
    if (k < steps) sum += integrand;
  }
  const double head = fit.head();
  return {head + sum * h, head};
}

ScalingReport scaling_law_check(double alpha, double beta, double t1, double t2, std::size_t n,
                                std::size_t grid_m, const McOptions& options) {
  require_exponents(alpha, beta);
  if (!(t1 > 0.0 && t1 <= t2)) throw InvalidArgument("scaling_law_check: need 0 < t1 <= t2");
  if (n < kMinReplicates) throw InvalidArgument("scaling_law_check: need n >= 1000");
  const std::size_t steps1 = steps_for(t1, grid_m);
  const std::size_t steps2 = steps_for(t2, grid_m);
  const double rescale = std::pow(t2 / t1, beta - 1.0);

  struct Pair {
    double b1 = 0.0;
    double b2 = 0.0;
  };
  const auto pairs = parallel_map(n, options.threads, [&](std::size_t i) {
    Rng r1(derive_seed(options.seed, i, StreamTag::driver));
    Rng r2(derive_seed(options.seed, i, StreamTag::secondary));
    return Pair{sample_clock_total(alpha, beta, t1, steps1, r1).total,
                rescale * sample_clock_total(alpha, beta, t2, steps2, r2).total};
  });
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = pairs[i].b1;
    b[i] = pairs[i].b2;
  }
  ScalingReport report;
  report.ks = ks_two_sample(SampleSet(std::move(a), "B_t1", options.seed),
                            SampleSet(std::move(b), "B_t2 rescaled", options.seed));
  report.exponent = 1.0 - beta;
  report.n = n;
  return report;
}

DivergenceReport divergence_check(double alpha, double beta, const std::vector<double>& times,
                                  double level, std::size_t n, std::size_t steps_per_run,
                                  const McOptions& options) {
  require_exponents(alpha, beta);
  if (times.empty()) throw InvalidArgument("divergence_check: empty time grid");
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] > 0.0) || (j > 0 && !(times[j] > times[j - 1]))) {
      throw InvalidArgument("divergence_check: times must be positive and increasing");
    }
  }
  if (n == 0) throw InvalidArgument("divergence_check: need n > 0");
  if (steps_per_run < kHeadFitPoints) throw InvalidArgument("divergence_check: too few steps");

  DivergenceReport report;
  report.level = level;
  report.n = n;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j];
    const auto hits = parallel_map(n, options.threads, [&](std::size_t i) {
      // Replicate i at time index j gets its own stream.
      Rng rng(derive_seed(options.seed, i * times.size() + j, StreamTag::driver));
      return sample_clock_total(alpha, beta, t, steps_per_run, rng).total <= level ? 1 : 0;
    });
    std::size_t count = 0;
    for (const int hit : hits) count += static_cast<std::size_t>(hit);
    const double p = static_cast<double>(count) / static_cast<double>(n);
    report.points.push_back({t, p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))});
  }
  report.strictly_decreasing = true;
  report.non_increasing = true;
  for (std::size_t j = 1; j < report.points.size(); ++j) {
    const auto& prev = report.points[j - 1];
    const auto& cur = report.points[j];
    const double band = 2.0 * std::hypot(prev.sigma, cur.sigma);
    if (!(prev.probability - cur.probability > band)) report.strictly_decreasing = false;
    if (cur.probability > prev.probability) report.non_increasing = false;
  }
  return report;
}

VLawReport v_law_check(double alpha, double beta, double horizon, std::size_t n,
                       std::size_t grid_m, const McOptions& options) {
  require_exponents(alpha, beta);
  if (n < kMinReplicates) throw InvalidArgument("v_law_check: need n >= 1000");
  const auto params = StableParams::normalized(alpha);

  const auto v1 = parallel_map(n, options.threads, [&](std::size_t i) {
    Rng rng(derive_seed(options.seed, i, StreamTag::driver));
    const auto run = run_counterexample(alpha, beta, horizon, grid_m, rng);
    return run.v_at(1.0);
  });
  std::vector<double> covered;
  covered.reserve(n);
  for (const auto& v : v1) {
    if (v) covered.push_back(*v);
  }
  std::vector<double> reference(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(options.seed, i, StreamTag::reference));
    reference[i] = sample_exact_increment(params, 1.0, rng);
  }

  VLawReport report;
  report.n = n;
  report.covered = covered.size();
  report.coverage = static_cast<double>(covered.size()) / static_cast<double>(n);
  report.inconclusive = report.coverage < 0.5;
  if (!covered.empty()) {
    report.median_ratio = median(covered) / median(reference);
    report.ks = ks_two_sample(SampleSet(std::move(covered), "V_1", options.seed),
                              SampleSet(std::move(reference), "Z_1", options.seed));
  }
  return report;
}

NonuniquenessReport nonuniqueness_demo(double alpha, double beta, double horizon, std::size_t n,
                                       std::size_t grid_m, const McOptions& options) {
  require_exponents(alpha, beta);
  if (n == 0) throw InvalidArgument("nonuniqueness_demo: need n > 0");
  const auto phi = MonotonePhi::power(beta);

  struct Outcome {
    bool covered = false;
    bool positive = false;
    double zero_residual = 0.0;
    double two_way = 0.0;
  };
  const auto outcomes = parallel_map(n, options.threads, [&](std::size_t i) {
    Rng rng(derive_seed(options.seed, i, StreamTag::driver));
    const auto run = run_counterexample(alpha, beta, horizon, grid_m, rng);
    Outcome o;
    o.two_way = run.two_way_residual();
    const auto x1 = run.x_at(1.0);
    if (!x1) return o;
    o.covered = true;
    o.positive = *x1 > 0.0;
    // X ≡ 0: every increment is 0 and φ(0)·ΔV = 0.
    const auto& y = run.y();
    const double phi0 = eval(phi, 0.0);
    for (std::size_t k = 1; k < y.size(); ++k) {
      o.zero_residual = std::max(o.zero_residual, std::abs(0.0 - phi0 * (y[k] - y[k - 1])));
    }
    return o;
  });

  NonuniquenessReport report;
  report.n = n;
  std::size_t positive = 0;
  for (const auto& o : outcomes) {
    report.max_two_way_residual = std::max(report.max_two_way_residual, o.two_way);
    if (!o.covered) continue;
    ++report.covered;
    if (o.positive) ++positive;
    report.zero_residual = std::max(report.zero_residual, o.zero_residual);
  }
  report.coverage = static_cast<double>(report.covered) / static_cast<double>(n);
  report.fraction_positive =
      report.covered ? static_cast<double>(positive) / static_cast<double>(report.covered) : 0.0;
  return report;
}

void write_report_csv(std::ostream& out, const std::vector<CheckRow>& rows) {
  out << "check,statistic,p_value,coverage,n,alpha,beta,grid_m,seed\n";
  for (const auto& r : rows) {
    csv::write_row(out, {r.check, csv::format_real(r.statistic), csv::format_real(r.p_value),
                         csv::format_real(r.coverage), std::to_string(r.n),
                         csv::format_real(r.alpha), csv::format_real(r.beta),
                         std::to_string(r.grid_m), std::to_string(r.seed)});
  }
}

}  // namespace stable_sde
