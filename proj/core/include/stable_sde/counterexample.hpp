#pragma once

// Non-uniqueness when φ vanishes: φ(x) = x^β, X_0 = 0.
//
// With Z started at 0, the clock B_t = ∫_0^t Z_{s-}^{-αβ} ds is finite, its
// inverse γ gives X_t = Z_{γ_t}, and V_t = Y_{γ_t} with
// Y_t = ∫_0^t φ(Z_{s-})^{-1} dZ_s is again an α-stable subordinator. X solves
// dX = φ(X⁻) dV from 0 without being identically zero, while X ≡ 0 solves the
// same equation.
//
// Truncating the driver would make Z ≡ 0 up to the first kept jump and the
// clock infinite, so Z is sampled exactly on a uniform grid s_k = k·h and
// treated as the step path Z_s = Z_{s_k} on [s_k, s_{k+1}). On that path every
// integral is a finite sum. The singular head [0, s_1] is modelled separately:
// the integrand is fitted as κ·s^{-β} on the first ten grid points and
// integrated exactly, giving κ·s_1^{1-β}/(1-β).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stable_sde/random.hpp"
#include "stable_sde/stable_driver.hpp"
#include "stable_sde/stats.hpp"
#include "stable_sde/time_change_solver.hpp"

namespace stable_sde {

struct McOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

class CounterexampleRun {
 public:
  CounterexampleRun(double alpha, double beta, GridPath driver, Clock clock,
                    double head_correction, std::vector<double> y, double two_way_residual);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  const GridPath& driver() const noexcept { return driver_; }
  /// B on [0, T]; the first segment carries the head correction.
  const Clock& clock() const noexcept { return clock_; }
  double head_correction() const noexcept { return head_correction_; }
  /// Y at grid points, Y_0 = 0.
  const std::vector<double>& y() const noexcept { return y_; }
  /// max_k |X̂_k - Z_{s_k}| / Z_{s_k}, X̂ from the event-wise solve of
  /// dX = φ(X⁻) dV started at Z_{s_1}.
  double two_way_residual() const noexcept { return two_way_residual_; }

  /// γ_t < T, i.e. t < B(T).
  bool covers(double t) const noexcept { return t < clock_.total(); }
  std::optional<double> gamma(double t) const { return clock_.invert(t); }
  /// Z_{γ_t}.
  std::optional<double> x_at(double t) const;
  /// Y_{γ_t}.
  std::optional<double> v_at(double t) const;

 private:
  std::size_t grid_index(double s) const;

  double alpha_;
  double beta_;
  GridPath driver_;
  Clock clock_;
  double head_correction_;
  std::vector<double> y_;
  double two_way_residual_;
};

/// `grid_m` is the number of grid steps per unit time (>= 100); the run uses
/// round(T·grid_m) steps. Driver normalization c = α/Γ(1-α). Throws
/// SamplerIntegrityError if a grid value at positive time is not positive.
CounterexampleRun run_counterexample(double alpha, double beta, double horizon,
                                     std::size_t grid_m, Rng& rng);

struct ClockSample {
  double total;            // head-corrected B(T)
  double head_correction;  // contribution of [0, s_1]
};

/// B(T) alone, drawing the same variates as run_counterexample with the same
/// stream; no per-step storage.
ClockSample sample_clock_total(double alpha, double beta, double horizon, std::size_t steps,
                               Rng& rng);

/// B(T) on the given grid path with step multiplied by `stride` (every
/// stride-th grid point), head-corrected.
ClockSample clock_total_on_subgrid(double alpha, double beta, const GridPath& driver,
                                   std::size_t stride);

struct ScalingReport {
  KSReport ks;
  double exponent = 0.0;  // 1 - β
  double coverage = 1.0;
  std::size_t n = 0;
};

/// KS between B_{t1} and (t2/t1)^{β-1}·B_{t2} from independent runs.
ScalingReport scaling_law_check(double alpha, double beta, double t1, double t2, std::size_t n,
                                std::size_t grid_m, const McOptions& options);

struct DivergencePoint {
  double t;
  double probability;  // empirical P(B_t <= M)
  double sigma;        // binomial standard error
};

struct DivergenceReport {
  std::vector<DivergencePoint> points;
  double level = 0.0;  // M
  std::size_t n = 0;
  /// Each successive estimate lies below its predecessor by more than two
  /// combined standard errors.
  bool strictly_decreasing = false;
  bool non_increasing = false;
};

/// Each run at horizon t uses `steps_per_run` grid steps (step t/steps_per_run).
DivergenceReport divergence_check(double alpha, double beta, const std::vector<double>& times,
                                  double level, std::size_t n, std::size_t steps_per_run,
                                  const McOptions& options);

struct VLawReport {
  KSReport ks;
  double coverage = 0.0;
  std::size_t covered = 0;
  std::size_t n = 0;
  bool inconclusive = false;  // coverage < 0.5
  /// median(V_1)/median(Z_1); the left-endpoint clock makes V_1 slightly
  /// small, so this sits a little below 1 and moves toward 1 as grid_m grows.
  double median_ratio = 0.0;
};

/// KS between V_1 over covered runs and n exact Z_1 draws.
VLawReport v_law_check(double alpha, double beta, double horizon, std::size_t n,
                       std::size_t grid_m, const McOptions& options);

struct NonuniquenessReport {
  double fraction_positive = 0.0;  // covered runs with X_1 > 0
  double zero_residual = 0.0;      // max |ΔX - φ(X⁻)ΔV| for X ≡ 0
  double coverage = 0.0;
  std::size_t covered = 0;
  std::size_t n = 0;
  double max_two_way_residual = 0.0;
};

NonuniquenessReport nonuniqueness_demo(double alpha, double beta, double horizon, std::size_t n,
                                       std::size_t grid_m, const McOptions& options);

struct CheckRow {
  std::string check;
  double statistic;
  double p_value;
  double coverage;
  std::size_t n;
  double alpha;
  double beta;
  std::size_t grid_m;
  std::uint64_t seed;
};

/// `check,statistic,p_value,coverage,n,alpha,beta,grid_m,seed`
void write_report_csv(std::ostream& out, const std::vector<CheckRow>& rows);

}  // namespace stable_sde
