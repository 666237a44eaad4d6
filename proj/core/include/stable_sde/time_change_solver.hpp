#pragma once

// Weak solution by time change.
//
// Given a driver path Z̃ and a start x, the additive clock
//     B_s = ∫_0^s φ(x + Z̃_u)^{-α} du
// is piecewise linear on the driver's constancy intervals, so it is computed
// exactly. Its right inverse τ_t = inf{s >= 0 : B_s > t} defines
//     X_t = x + Z̃_{τ_t},
// and the forward clock τ_t = ∫_0^t φ(X_v)^α dv inverts B back.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "stable_sde/phi.hpp"
#include "stable_sde/stable_driver.hpp"
#include "stable_sde/truncation_solver.hpp"

namespace stable_sde {

/// Continuous, strictly increasing, piecewise-linear clock on [0, horizon].
class Clock {
 public:
  /// `breakpoints` = 0 = u_0 < u_1 < ... < u_n = horizon, `slopes` has n > 0
  /// strictly positive entries. Cumulative values are summed left to right.
  Clock(std::vector<double> breakpoints, std::vector<double> slopes);

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> slopes() const noexcept { return slopes_; }
  std::span<const double> values() const noexcept { return values_; }
  double horizon() const noexcept { return breakpoints_.back(); }
  double total() const noexcept { return values_.back(); }

  /// Clock value at s in [0, horizon].
  double operator()(double s) const;

  /// Right inverse inf{s : B_s > t} for t >= 0. Returns std::nullopt (the
  /// beyond-horizon sentinel) when t >= total(). At a breakpoint value the
  /// breakpoint itself is returned bit-exactly.
  std::optional<double> invert(double t) const;

 private:
  // Unit slope starting on the diagonal: B(s) = s exactly on this segment.
  bool on_diagonal(std::size_t i) const noexcept {
    return slopes_[i] == 1.0 && values_[i] == breakpoints_[i];
  }

  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  std::vector<double> values_;
};

/// B for start x and driver path: slope φ(x + Z_u)^{-α} on each constancy
/// interval of the driver. Requires φ.assumption_ok() and a finite-activity driver.
Clock build_clock_B(const MonotonePhi& phi, double x, const JumpPath& driver, double alpha);

/// Forward clock τ from a solved path: slope φ(X_v)^{α} on each constancy interval.
Clock build_clock_tau(const MonotonePhi& phi, const SolutionPath& solution, double alpha);

/// Free-function form of Clock::invert.
std::optional<double> invert_clock(const Clock& clock, double t);

struct TimeChangeSolution {
  Clock clock;            // B on the driver's time axis [0, T]
  SolutionPath path;      // X on [0, B(T)]; unavailable beyond
  double available_until() const noexcept { return clock.total(); }
};

/// X_t = x + Z̃_{τ_t} with τ the right inverse of build_clock_B.
TimeChangeSolution solve_time_change(const MonotonePhi& phi, double x, const JumpPath& driver,
                                     double alpha);

/// X_t at a given time, or std::nullopt when t >= B(T) (beyond the driver horizon).
std::optional<double> time_changed_value(const TimeChangeSolution& solution, double t);

/// max over driver event times u of |τ(B(u)) - u| and over mapped event times
/// t of |B(τ(t)) - t|, with τ rebuilt from the solved path.
double clock_roundtrip_residual(const MonotonePhi& phi, double x, const JumpPath& driver,
                                double alpha);

/// The noise seen by the SDE form: jumps ΔX / φ(X_{t-}) at the solution's
/// event times, i.e. Z_t = ∫ φ(X_{s-})^{-1} dX_s.
JumpPath implied_driver(const MonotonePhi& phi, const SolutionPath& solution);

/// `u,B`
void write_csv(std::ostream& out, const Clock& clock);

}  // namespace stable_sde
