#include "stable_sde/truncation_solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "stable_sde/csv.hpp"
#include "stable_sde/error.hpp"

namespace stable_sde {

SolutionPath::SolutionPath(double x0, double horizon, std::vector<SolutionEvent> events,
                           bool overflowed)
    : x0_(x0), horizon_(horizon), events_(std::move(events)), overflowed_(overflowed) {
  if (!(horizon > 0.0)) throw InvalidArgument("SolutionPath: horizon must be positive");
  double prev = 0.0;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& e = events_[i];
    if (e.time < prev || (i > 0 && e.time == prev) || e.time > horizon) {
      throw InvalidArgument("SolutionPath: event times must be strictly increasing in [0, T]");
    }
    prev = e.time;
  }
}

double SolutionPath::value_at(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) {
    throw InvalidArgument("SolutionPath::value_at: t outside [0, horizon]");
  }
  const auto it = std::upper_bound(events_.begin(), events_.end(), t,
                                   [](double v, const SolutionEvent& e) { return v < e.time; });
  return it == events_.begin() ? x0_ : std::prev(it)->x_post;
}

SolutionPath solve_truncated(const MonotonePhi& phi, double x0, const JumpPath& driver,
                             const SolveOptions& options) {
  if (!(driver.cutoff() > 0.0)) {
    throw InvalidArgument("solve_truncated: driver must be finite-activity (cutoff > 0)");
  }
  if (!phi.assumption_ok()) {
    throw InvalidArgument("solve_truncated: phi violates the standing assumption (" +
                          phi.report().reason + ")");
  }
  if (!std::isfinite(x0)) throw InvalidArgument("solve_truncated: x0 must be finite");

  std::vector<SolutionEvent> events;
  events.reserve(driver.size());
  double x = x0;
  for (const auto& jump : driver.events()) {
    const double f = eval(phi, x);
    if (!std::isfinite(f)) {
      throw NonFiniteState(jump.time, x,
                           "solve_truncated: phi(" + csv::format_real(x) + ") is not finite at t=" +
                               csv::format_real(jump.time));
    }
    const double next = x + f * jump.size;
    events.push_back({jump.time, x, next});
    x = next;
    if (!(std::abs(x) <= options.overflow_guard)) {
      return SolutionPath(x0, driver.horizon(), std::move(events), true);
    }
  }
  return SolutionPath(x0, driver.horizon(), std::move(events));
}

Ladder build_ladder(const MonotonePhi& phi, double x0, const JumpPath& base,
                    std::vector<double> cutoffs, const SolveOptions& options) {
  if (cutoffs.empty()) throw InvalidArgument("build_ladder: need at least one cutoff");
  for (std::size_t j = 0; j < cutoffs.size(); ++j) {
    if (!(cutoffs[j] > 0.0)) throw InvalidArgument("build_ladder: cutoffs must be positive");
    if (j > 0 && !(cutoffs[j] < cutoffs[j - 1])) {
      throw InvalidArgument("build_ladder: cutoffs must be strictly decreasing");
    }
  }
  if (base.cutoff() > cutoffs.back()) {
    throw InvalidArgument("build_ladder: base path is coarser than the finest cutoff");
  }
  std::vector<SolutionPath> levels;
  levels.reserve(cutoffs.size());
  for (const double eps : cutoffs) {
    levels.push_back(solve_truncated(phi, x0, thin_path(base, eps), options));
  }
  return Ladder{base, std::move(cutoffs), std::move(levels)};
}

Ladder build_ladder(const MonotonePhi& phi, double x0, const StableParams& params, double horizon,
                    std::vector<double> cutoffs, Rng& rng, const SolveOptions& options) {
  if (cutoffs.empty()) throw InvalidArgument("build_ladder: need at least one cutoff");
  if (!(cutoffs.back() > 0.0)) throw InvalidArgument("build_ladder: cutoffs must be positive");
  auto base = sample_truncated_path(params, horizon, cutoffs.back(), rng);
  return build_ladder(phi, x0, base, std::move(cutoffs), options);
}

namespace {

// Visits every time in {0} ∪ events(a) ∪ events(b) ∪ {T} with the values of
// both paths at that time.
template <class Fn>
void sweep_union(const SolutionPath& a, const SolutionPath& b, Fn&& fn) {
  if (a.horizon() != b.horizon()) {
    throw InvalidArgument("paths compared on different horizons");
  }
  const auto ea = a.events();
  const auto eb = b.events();
  std::size_t i = 0;
  std::size_t j = 0;
  double xa = a.x0();
  double xb = b.x0();
  fn(0.0, xa, xb);
  while (i < ea.size() || j < eb.size()) {
    double t;
    if (j == eb.size() || (i < ea.size() && ea[i].time < eb[j].time)) {
      t = ea[i].time;
    } else {
      t = eb[j].time;
    }
    while (i < ea.size() && ea[i].time == t) xa = ea[i++].x_post;
    while (j < eb.size() && eb[j].time == t) xb = eb[j++].x_post;
    fn(t, xa, xb);
  }
  fn(a.horizon(), xa, xb);
}

}  // namespace

std::size_t dominance_violations(const SolutionPath& coarse, const SolutionPath& fine) {
  std::size_t violations = 0;
  sweep_union(coarse, fine, [&](double, double xc, double xf) {
    if (xf < xc) ++violations;
  });
  return violations;
}

std::size_t ladder_violations(const Ladder& ladder) {
  std::size_t total = 0;
  for (std::size_t j = 1; j < ladder.levels.size(); ++j) {
    total += dominance_violations(ladder.levels[j - 1], ladder.levels[j]);
  }
  return total;
}

double sup_distance(const SolutionPath& a, const SolutionPath& b) {
  double d = 0.0;
  sweep_union(a, b, [&](double, double xa, double xb) { d = std::max(d, std::abs(xa - xb)); });
  return d;
}

LimitEstimate monotone_limit_estimate(const Ladder& ladder, double t) {
  LimitEstimate est;
  est.values.reserve(ladder.levels.size());
  for (const auto& level : ladder.levels) est.values.push_back(level.value_at(t));
  for (std::size_t j = 1; j < est.values.size(); ++j) {
    est.differences.push_back(est.values[j] - est.values[j - 1]);
  }
  return est;
}

double coupled_pair_distance(const MonotonePhi& phi, double x0, const JumpPath& base,
                             double coarse, double fine, const SolveOptions& options) {
  if (!(fine <= coarse)) throw InvalidArgument("coupled_pair_distance: need fine <= coarse");
  const auto xc = solve_truncated(phi, x0, thin_path(base, coarse), options);
  const auto xf = solve_truncated(phi, x0, thin_path(base, fine), options);
  return sup_distance(xc, xf);
}

double coupled_pair_distance(const MonotonePhi& phi, double x0, const StableParams& params,
                             double horizon, double eps, Rng& rng, const SolveOptions& options) {
  if (!(eps > 0.0)) throw InvalidArgument("coupled_pair_distance: eps must be positive");
  const auto base = sample_truncated_path(params, horizon, eps / 2.0, rng);
  return coupled_pair_distance(phi, x0, base, eps, eps / 2.0, options);
}

std::size_t replay_mismatches(const MonotonePhi& phi, const JumpPath& driver,
                              const SolutionPath& solution) {
  const auto jumps = driver.events();
  const auto events = solution.events();
  std::size_t bad = jumps.size() > events.size() && !solution.overflowed()
                        ? jumps.size() - events.size()
                        : 0;
  double x = solution.x0();
  const std::size_t n = std::min(jumps.size(), events.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double next = x + eval(phi, x) * jumps[i].size;
    const auto& e = events[i];
    if (e.time != jumps[i].time || e.x_pre != x || e.x_post != next) ++bad;
    x = e.x_post;
  }
  return bad;
}

void write_csv(std::ostream& out, const SolutionPath& path) {
  out << "t,x_pre,x_post\n";
  for (const auto& e : path.events()) {
    csv::write_row(out, {csv::format_real(e.time), csv::format_real(e.x_pre),
                         csv::format_real(e.x_post)});
  }
}

void write_ladder_csv(std::ostream& out, const Ladder& ladder) {
  out << "eps,t,x\n";
  for (std::size_t j = 0; j < ladder.levels.size(); ++j) {
    const auto eps = csv::format_real(ladder.cutoffs[j]);
    const auto& level = ladder.levels[j];
    csv::write_row(out, {eps, csv::format_real(0.0), csv::format_real(level.x0())});
    for (const auto& e : level.events()) {
      csv::write_row(out, {eps, csv::format_real(e.time), csv::format_real(e.x_post)});
    }
    csv::write_row(out, {eps, csv::format_real(level.horizon()),
                         csv::format_real(level.terminal())});
  }
}

}  // namespace stable_sde
