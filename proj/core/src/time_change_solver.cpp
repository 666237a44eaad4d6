#include "stable_sde/time_change_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "stable_sde/csv.hpp"
#include "stable_sde/error.hpp"

namespace stable_sde {

Clock::Clock(std::vector<double> breakpoints, std::vector<double> slopes)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)) {
  if (breakpoints_.size() < 2 || slopes_.size() + 1 != breakpoints_.size()) {
    throw InvalidArgument("Clock: need n+1 breakpoints for n > 0 slopes");
  }
  if (breakpoints_.front() != 0.0) throw InvalidArgument("Clock: first breakpoint must be 0");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1]) || !std::isfinite(breakpoints_[i])) {
      throw InvalidArgument("Clock: breakpoints must be finite and strictly increasing");
    }
  }
  for (const double s : slopes_) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw InvalidArgument("Clock: slopes must be finite and strictly positive");
    }
  }
  values_.resize(breakpoints_.size());
  values_[0] = 0.0;
  for (std::size_t i = 0; i < slopes_.size(); ++i) {
    const double u0 = breakpoints_[i];
    const double u1 = breakpoints_[i + 1];
    // A unit-slope segment that starts on the diagonal stays on it.
    if (slopes_[i] == 1.0 && values_[i] == u0) {  // see on_diagonal()
      values_[i + 1] = u1;
    } else {
      values_[i + 1] = values_[i] + slopes_[i] * (u1 - u0);
    }
  }
}

double Clock::operator()(double s) const {
  if (!(s >= 0.0 && s <= horizon())) throw InvalidArgument("Clock: argument outside [0, horizon]");
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  const auto i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  if (i == slopes_.size()) return values_.back();
  if (s == breakpoints_[i]) return values_[i];
  if (on_diagonal(i)) return s;
  return values_[i] + slopes_[i] * (s - breakpoints_[i]);
}

std::optional<double> Clock::invert(double t) const {
  if (!(t >= 0.0)) throw InvalidArgument("Clock::invert: t must be >= 0");
  if (t >= values_.back()) return std::nullopt;
  // Last segment whose left value is <= t: the right endpoint convention.
  const auto it = std::upper_bound(values_.begin(), values_.end(), t);
  const auto i = static_cast<std::size_t>(it - values_.begin()) - 1;
  if (t == values_[i]) return breakpoints_[i];
  if (on_diagonal(i)) return t;
  const double s = breakpoints_[i] + (t - values_[i]) / slopes_[i];
  return std::min(s, breakpoints_[i + 1]);
}

std::optional<double> invert_clock(const Clock& clock, double t) { return clock.invert(t); }

namespace {

void require_assumption(const MonotonePhi& phi, const char* who) {
  if (!phi.assumption_ok()) {
    throw InvalidArgument(std::string(who) + ": phi violates the standing assumption (" +
                          phi.report().reason + ")");
  }
}

void require_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument(std::string(who) + ": alpha must lie in (0,1)");
  }
}

}  // namespace

Clock build_clock_B(const MonotonePhi& phi, double x, const JumpPath& driver, double alpha) {
  require_assumption(phi, "build_clock_B");
  require_alpha(alpha, "build_clock_B");
  if (!(driver.cutoff() > 0.0)) {
    throw InvalidArgument("build_clock_B: driver must be finite-activity (cutoff > 0)");
  }
  std::vector<double> breakpoints{0.0};
  std::vector<double> slopes;
  breakpoints.reserve(driver.size() + 2);
  slopes.reserve(driver.size() + 1);
  double z = 0.0;
  for (const auto& e : driver.events()) {
    slopes.push_back(eval_pow(phi, x + z, -alpha));
    breakpoints.push_back(e.time);
    z += e.size;
  }
  if (breakpoints.back() < driver.horizon()) {
    slopes.push_back(eval_pow(phi, x + z, -alpha));
    breakpoints.push_back(driver.horizon());
  }
  return Clock(std::move(breakpoints), std::move(slopes));
}

Clock build_clock_tau(const MonotonePhi& phi, const SolutionPath& solution, double alpha) {
  require_assumption(phi, "build_clock_tau");
  require_alpha(alpha, "build_clock_tau");
  std::vector<double> breakpoints{0.0};
  std::vector<double> slopes;
  double x = solution.x0();
  for (const auto& e : solution.events()) {
    if (e.time > breakpoints.back()) {
      slopes.push_back(eval_pow(phi, x, alpha));
      breakpoints.push_back(e.time);
    }
    x = e.x_post;
  }
  if (breakpoints.back() < solution.horizon()) {
    slopes.push_back(eval_pow(phi, x, alpha));
    breakpoints.push_back(solution.horizon());
  }
  return Clock(std::move(breakpoints), std::move(slopes));
}

TimeChangeSolution solve_time_change(const MonotonePhi& phi, double x, const JumpPath& driver,
                                     double alpha) {
  if (!std::isfinite(x)) throw InvalidArgument("solve_time_change: x must be finite");
  auto clock = build_clock_B(phi, x, driver, alpha);

  // Driver event u_i maps to B(u_i); Z̃ is càdlàg so X takes the post-jump
  // value from B(u_i) on.
  std::vector<SolutionEvent> events;
  events.reserve(driver.size());
  double z = 0.0;
  for (const auto& e : driver.events()) {
    const double t = clock(e.time);
    const double pre = x + z;
    z += e.size;
    const double post = x + z;
    if (!events.empty() && events.back().time == t) {
      events.back().x_post = post;  // clock increments lost to rounding
    } else {
      events.push_back({t, pre, post});
    }
  }
  SolutionPath path(x, clock.total(), std::move(events));
  return TimeChangeSolution{std::move(clock), std::move(path)};
}

std::optional<double> time_changed_value(const TimeChangeSolution& solution, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("time_changed_value: t must be >= 0");
  if (t >= solution.available_until()) return std::nullopt;
  return solution.path.value_at(t);
}

double clock_roundtrip_residual(const MonotonePhi& phi, double x, const JumpPath& driver,
                                double alpha) {
  const auto sol = solve_time_change(phi, x, driver, alpha);
  const auto tau = build_clock_tau(phi, sol.path, alpha);
  const auto& B = sol.clock;
  double r = 0.0;
  for (const double u : B.breakpoints()) {
    r = std::max(r, std::abs(tau(std::min(B(u), tau.horizon())) - u));
  }
  for (const double t : tau.breakpoints()) {
    r = std::max(r, std::abs(B(std::min(tau(t), B.horizon())) - t));
  }
  return r;
}

JumpPath implied_driver(const MonotonePhi& phi, const SolutionPath& solution) {
  std::vector<JumpEvent> jumps;
  jumps.reserve(solution.events().size());
  for (const auto& e : solution.events()) {
    const double f = eval(phi, e.x_pre);
    if (!(f > 0.0)) {
      throw InvalidArgument("implied_driver: phi must be positive along the path");
    }
    jumps.push_back({e.time, (e.x_post - e.x_pre) / f});
  }
  // Every positive jump is retained; the path is finite by construction.
  return JumpPath(solution.horizon(), std::numeric_limits<double>::min(), std::move(jumps));
}

void write_csv(std::ostream& out, const Clock& clock) {
  out << "u,B\n";
  const auto u = clock.breakpoints();
  const auto b = clock.values();
  for (std::size_t i = 0; i < u.size(); ++i) {
    csv::write_row(out, {csv::format_real(u[i]), csv::format_real(b[i])});
  }
}

}  // namespace stable_sde
