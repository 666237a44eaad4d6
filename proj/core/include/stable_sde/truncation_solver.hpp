#pragma once

// Strong solution by jump truncation.
//
// For a driver truncated at ε > 0 there are finitely many jumps, so
// dX = φ(X⁻) dZ^ε is solved exactly: X is constant between jumps and moves by
// φ(X_{t-})·ΔZ at each one. Truncation levels are coupled by thinning one base
// path; with φ non-decreasing the finer level dominates the coarser at every
// time, and the levels increase to the solution driven by the full process.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "stable_sde/phi.hpp"
#include "stable_sde/random.hpp"
#include "stable_sde/stable_driver.hpp"

namespace stable_sde {

struct SolutionEvent {
  double time;
  double x_pre;   // X_{t-}
  double x_post;  // X_t
  friend bool operator==(const SolutionEvent&, const SolutionEvent&) = default;
};

/// Piecewise-constant càdlàg solution on [0, horizon].
class SolutionPath {
 public:
  SolutionPath(double x0, double horizon, std::vector<SolutionEvent> events,
               bool overflowed = false);

  double x0() const noexcept { return x0_; }
  double horizon() const noexcept { return horizon_; }
  std::span<const SolutionEvent> events() const noexcept { return events_; }
  /// True when the run stopped early at the overflow guard; values after the
  /// last recorded event are then not meaningful.
  bool overflowed() const noexcept { return overflowed_; }

  /// X_t for t in [0, horizon] (right-continuous).
  double value_at(double t) const;
  double terminal() const noexcept { return events_.empty() ? x0_ : events_.back().x_post; }

  friend bool operator==(const SolutionPath&, const SolutionPath&) = default;

 private:
  double x0_;
  double horizon_;
  std::vector<SolutionEvent> events_;
  bool overflowed_;
};

struct SolveOptions {
  /// Stop when |X| exceeds this; the path is flagged overflowed().
  double overflow_guard = 1e300;
};

/// Exact event-driven solve of dX = φ(X⁻) dZ on a finite-activity driver.
/// Rejects cutoff == 0 drivers and φ with assumption_ok() == false; throws
/// NonFiniteState if φ evaluates to a non-finite value.
SolutionPath solve_truncated(const MonotonePhi& phi, double x0, const JumpPath& driver,
                             const SolveOptions& options = {});

struct Ladder {
  JumpPath base;                       // sampled at cutoffs.back()
  std::vector<double> cutoffs;         // strictly decreasing
  std::vector<SolutionPath> levels;    // levels[j] driven by thin_path(base, cutoffs[j])
};

Ladder build_ladder(const MonotonePhi& phi, double x0, const StableParams& params, double horizon,
                    std::vector<double> cutoffs, Rng& rng, const SolveOptions& options = {});

/// Same, on a caller-supplied base path (its cutoff must not exceed the finest level).
Ladder build_ladder(const MonotonePhi& phi, double x0, const JumpPath& base,
                    std::vector<double> cutoffs, const SolveOptions& options = {});

/// Number of times t in the union of both event sets (plus 0 and the horizon)
/// where fine(t) < coarse(t). Exact comparison, no tolerance.
std::size_t dominance_violations(const SolutionPath& coarse, const SolutionPath& fine);

/// Sum of dominance_violations over all adjacent ladder pairs.
std::size_t ladder_violations(const Ladder& ladder);

/// sup_t |a(t) - b(t)|, exact for piecewise-constant paths (max over the union
/// of event times). Both paths must share the horizon.
double sup_distance(const SolutionPath& a, const SolutionPath& b);

struct LimitEstimate {
  std::vector<double> values;       // X^{ε_1}_t <= ... <= X^{ε_K}_t
  std::vector<double> differences;  // values[j+1] - values[j]
  /// Finest level; no extrapolation is attempted.
  double finest() const { return values.back(); }
};

LimitEstimate monotone_limit_estimate(const Ladder& ladder, double t);

/// sup-distance between X^{eps} and X^{eps/2} on one shared path sampled at eps/2.
double coupled_pair_distance(const MonotonePhi& phi, double x0, const StableParams& params,
                             double horizon, double eps, Rng& rng,
                             const SolveOptions& options = {});

/// sup-distance between the solutions on thin_path(base, coarse) and
/// thin_path(base, fine); requires fine <= coarse and base.cutoff() <= fine.
double coupled_pair_distance(const MonotonePhi& phi, double x0, const JumpPath& base,
                             double coarse, double fine, const SolveOptions& options = {});

/// Re-applies X_t = X_{t-} + φ(X_{t-})ΔZ to every event of `solution` using
/// `driver` and returns the number of events that do not reproduce bit-exactly.
std::size_t replay_mismatches(const MonotonePhi& phi, const JumpPath& driver,
                              const SolutionPath& solution);

/// `t,x_pre,x_post`
void write_csv(std::ostream& out, const SolutionPath& path);
/// `eps,t,x`: each level's value at 0, at each of its event times, and at T.
void write_ladder_csv(std::ostream& out, const Ladder& ladder);

}  // namespace stable_sde
