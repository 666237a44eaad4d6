#pragma once

// One-sided α-stable driver (stable subordinator), α ∈ (0,1).
//
// The Lévy measure is ν(dh) = c·h^{-1-α} dh on (0,∞), so the Laplace exponent
// is ψ(λ) = c·Γ(1-α)·λ^α / α and E exp(-λ Z_t) = exp(-t ψ(λ)). The default
// normalization c = α / Γ(1-α) gives ψ(λ) = λ^α.
//
// Two path representations are offered:
//   * JumpPath  - every jump of size >= cutoff on (0, T]; a compound Poisson
//                 process, exact in law for the truncated driver.
//   * GridPath  - exact-law values of the full driver on a uniform grid,
//                 used where truncation would destroy the small-jump activity.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stable_sde/random.hpp"

namespace stable_sde {

class StableParams {
 public:
  /// Throws InvalidArgument unless 0 < alpha < 1 and c > 0.
  StableParams(double alpha, double c);

  /// c = α / Γ(1-α), i.e. ψ(λ) = λ^α.
  static StableParams normalized(double alpha);

  double alpha() const noexcept { return alpha_; }
  double c() const noexcept { return c_; }

  friend bool operator==(const StableParams&, const StableParams&) = default;

 private:
  double alpha_;
  double c_;
};

struct JumpEvent {
  double time;
  double size;
  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

/// Finite, time-sorted jump list on (0, T]. Piecewise constant and càdlàg.
class JumpPath {
 public:
  /// Validates: horizon > 0, cutoff >= 0, times strictly increasing in (0, T],
  /// sizes > 0 and >= cutoff.
  JumpPath(double horizon, double cutoff, std::vector<JumpEvent> events);

  double horizon() const noexcept { return horizon_; }
  double cutoff() const noexcept { return cutoff_; }
  std::span<const JumpEvent> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  /// Sum of all jump sizes (value at the horizon).
  double total() const noexcept;

  friend bool operator==(const JumpPath&, const JumpPath&) = default;

 private:
  double horizon_;
  double cutoff_;
  std::vector<JumpEvent> events_;
};

/// Exact-increment samples of the driver on s_k = k·T/m, k = 0..m.
class GridPath {
 public:
  /// Validates: m >= 1, values.size() == m + 1, values[0] == 0, non-decreasing.
  GridPath(double horizon, std::vector<double> values);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return values_.size() - 1; }
  double step() const noexcept { return horizon_ / static_cast<double>(steps()); }
  double time(std::size_t k) const noexcept {
    return horizon_ * static_cast<double>(k) / static_cast<double>(steps());
  }
  std::span<const double> values() const noexcept { return values_; }

 private:
  double horizon_;
  std::vector<double> values_;
};

/// ν([eps, ∞)) = c·eps^{-α}/α: jump intensity of the driver truncated at eps.
double levy_tail_mass(const StableParams& params, double eps);

/// ψ(λ) = c·Γ(1-α)·λ^α / α.
double laplace_exponent(const StableParams& params, double lambda);

/// Compound Poisson path of all jumps >= eps on (0, T]. Event count is
/// Poisson(T·levy_tail_mass), times are uniform order statistics, sizes are
/// Pareto(eps, α). Draw order: count, then times, then sizes.
JumpPath sample_truncated_path(const StableParams& params, double horizon, double eps,
                               Rng& rng);

/// Keeps jumps with size >= new_eps. Throws if new_eps < path.cutoff().
JumpPath thin_path(const JumpPath& path, double new_eps);

/// Σ sizes with t_i <= t. Throws unless 0 <= t <= horizon.
double path_value(const JumpPath& path, double t);

/// One draw of Z_dt via Kanter's representation of the positive stable law.
double sample_exact_increment(const StableParams& params, double dt, Rng& rng);

/// sample_exact_increment with the per-dt constants hoisted out; draws the
/// same variates from the same stream.
class ExactIncrementSampler {
 public:
  ExactIncrementSampler(const StableParams& params, double dt);
  double operator()(Rng& rng) const;

 private:
  double alpha_;
  double log_scale_;  // log((dt·ψ(1))^{1/α})
};

/// Driver on a uniform grid of `steps` intervals over [0, horizon].
GridPath sample_grid_path(const StableParams& params, double horizon, std::size_t steps,
                          Rng& rng);

// CSV: JumpPath as `t,dz`, GridPath as `s,value`; 17 significant digits.
void write_csv(std::ostream& out, const JumpPath& path);
void write_csv(std::ostream& out, const GridPath& path);

/// Parses the `t,dz` format back. Horizon and cutoff are not part of the
/// file and must be supplied.
JumpPath read_jump_path_csv(std::istream& in, double horizon, double cutoff);

}  // namespace stable_sde
