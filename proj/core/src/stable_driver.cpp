#include "stable_sde/stable_driver.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "stable_sde/csv.hpp"
#include "stable_sde/error.hpp"

namespace stable_sde {

namespace {

// Refuse to allocate absurd paths; desk-scale runs stay far below this.
constexpr double kMaxExpectedEvents = 5.0e7;

}  // namespace

StableParams::StableParams(double alpha, double c) : alpha_(alpha), c_(c) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("StableParams: alpha must lie in (0,1), got " + std::to_string(alpha));
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidArgument("StableParams: c must be positive and finite, got " + std::to_string(c));
  }
}

StableParams StableParams::normalized(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("StableParams: alpha must lie in (0,1), got " + std::to_string(alpha));
  }
  return StableParams(alpha, alpha / std::tgamma(1.0 - alpha));
}

JumpPath::JumpPath(double horizon, double cutoff, std::vector<JumpEvent> events)
    : horizon_(horizon), cutoff_(cutoff), events_(std::move(events)) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("JumpPath: horizon must be positive and finite");
  }
  if (!(cutoff >= 0.0) || !std::isfinite(cutoff)) {
    throw InvalidArgument("JumpPath: cutoff must be finite and >= 0");
  }
  double prev = 0.0;
  for (const auto& e : events_) {
    if (!(e.time > prev) || e.time > horizon) {
      throw InvalidArgument("JumpPath: event times must be strictly increasing in (0, T]");
    }
    if (!(e.size > 0.0) || !std::isfinite(e.size) || e.size < cutoff) {
      throw InvalidArgument("JumpPath: jump sizes must be finite, positive and >= cutoff");
    }
    prev = e.time;
  }
}

double JumpPath::total() const noexcept {
  double s = 0.0;
  for (const auto& e : events_) s += e.size;
  return s;
}

GridPath::GridPath(double horizon, std::vector<double> values)
    : horizon_(horizon), values_(std::move(values)) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("GridPath: horizon must be positive and finite");
  }
  if (values_.size() < 2) throw InvalidArgument("GridPath: need at least one step");
  if (values_.front() != 0.0) throw InvalidArgument("GridPath: values[0] must be 0");
  for (std::size_t k = 1; k < values_.size(); ++k) {
    if (!(values_[k] >= values_[k - 1]) || !std::isfinite(values_[k])) {
      throw InvalidArgument("GridPath: values must be finite and non-decreasing");
    }
  }
}

double levy_tail_mass(const StableParams& params, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("levy_tail_mass: eps must be positive");
  const double a = params.alpha();
  return params.c() * std::pow(eps, -a) / a;
}

double laplace_exponent(const StableParams& params, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("laplace_exponent: lambda must be positive");
  const double a = params.alpha();
  return params.c() * std::tgamma(1.0 - a) * std::pow(lambda, a) / a;
}

JumpPath sample_truncated_path(const StableParams& params, double horizon, double eps,
                               Rng& rng) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidArgument("sample_truncated_path: eps must be positive and finite");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("sample_truncated_path: horizon must be positive and finite");
  }
  const double mean = horizon * levy_tail_mass(params, eps);
  if (mean > kMaxExpectedEvents) {
    throw InvalidArgument("sample_truncated_path: expected event count " + std::to_string(mean) +
                          " exceeds the supported maximum; raise eps");
  }
  const auto n = static_cast<std::size_t>(rng.poisson(mean));

  std::vector<double> times(n);
  for (auto& t : times) t = horizon * rng.uniform_pos();
  std::sort(times.begin(), times.end());
  // Coincident doubles are possible in principle; nudge them apart.
  for (std::size_t i = 1; i < n; ++i) {
    if (times[i] <= times[i - 1]) times[i] = std::nextafter(times[i - 1], horizon + 1.0);
  }
  if (n > 0 && times.back() > horizon) {
    throw SamplerIntegrityError("sample_truncated_path: could not separate coincident times");
  }

  const double inv_alpha = 1.0 / params.alpha();
  std::vector<JumpEvent> events(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Pareto(eps, α): P(H > h) = (eps/h)^α.
    const double h = eps * std::pow(rng.uniform_pos(), -inv_alpha);
    events[i] = JumpEvent{times[i], std::max(h, eps)};
  }
  return JumpPath(horizon, eps, std::move(events));
}

JumpPath thin_path(const JumpPath& path, double new_eps) {
  if (!(new_eps >= path.cutoff()) || !std::isfinite(new_eps)) {
    throw InvalidArgument("thin_path: new cutoff is below the path's cutoff; "
                          "jumps below the original cutoff were never sampled");
  }
  std::vector<JumpEvent> kept;
  kept.reserve(path.size());
  for (const auto& e : path.events()) {
    if (e.size >= new_eps) kept.push_back(e);
  }
  return JumpPath(path.horizon(), new_eps, std::move(kept));
}

double path_value(const JumpPath& path, double t) {
  if (!(t >= 0.0 && t <= path.horizon())) {
    throw InvalidArgument("path_value: t outside [0, horizon]");
  }
  double s = 0.0;
  for (const auto& e : path.events()) {
    if (e.time > t) break;
    s += e.size;
  }
  return s;
}

ExactIncrementSampler::ExactIncrementSampler(const StableParams& params, double dt)
    : alpha_(params.alpha()) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("sample_exact_increment: dt must be positive and finite");
  }
  const double a = alpha_;
  const double psi1 = params.c() * std::tgamma(1.0 - a) / a;
  log_scale_ = std::log(dt * psi1) / a;
}

double ExactIncrementSampler::operator()(Rng& rng) const {
  const double a = alpha_;
  // Kanter: for U ~ U(0,π), W ~ Exp(1),
  //   S = sin(aU)/sin(U)^{1/a} · (sin((1-a)U)/W)^{(1-a)/a}
  // has E exp(-λS) = exp(-λ^a). Evaluated in logs to avoid overflow.
  // Z_dt = (dt·ψ(1))^{1/a} · S.
  const double u = std::numbers::pi * rng.uniform_open();
  const double w = rng.exponential();
  const double log_s = std::log(std::sin(a * u)) - std::log(std::sin(u)) / a +
                       (1.0 - a) / a * (std::log(std::sin((1.0 - a) * u)) - std::log(w));
  return std::exp(log_s + log_scale_);
}

double sample_exact_increment(const StableParams& params, double dt, Rng& rng) {
  return ExactIncrementSampler(params, dt)(rng);
}

GridPath sample_grid_path(const StableParams& params, double horizon, std::size_t steps,
                          Rng& rng) {
  if (steps < 1) throw InvalidArgument("sample_grid_path: need at least one step");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("sample_grid_path: horizon must be positive and finite");
  }
  const ExactIncrementSampler draw(params, horizon / static_cast<double>(steps));
  std::vector<double> values(steps + 1);
  values[0] = 0.0;
  double z = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    z += draw(rng);
    values[k] = z;
  }
  return GridPath(horizon, std::move(values));
}

void write_csv(std::ostream& out, const JumpPath& path) {
  out << "t,dz\n";
  for (const auto& e : path.events()) {
    csv::write_row(out, {csv::format_real(e.time), csv::format_real(e.size)});
  }
}

void write_csv(std::ostream& out, const GridPath& path) {
  out << "s,value\n";
  const auto values = path.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    csv::write_row(out, {csv::format_real(path.time(k)), csv::format_real(values[k])});
  }
}

JumpPath read_jump_path_csv(std::istream& in, double horizon, double cutoff) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("jump path CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,dz") throw InvalidArgument("jump path CSV: expected header 't,dz'");
  std::vector<JumpEvent> events;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split_row(line);
    if (fields.size() != 2) throw InvalidArgument("jump path CSV: expected 2 columns");
    events.push_back({csv::parse_real(fields[0]), csv::parse_real(fields[1])});
  }
  return JumpPath(horizon, cutoff, std::move(events));
}

}  // namespace stable_sde
