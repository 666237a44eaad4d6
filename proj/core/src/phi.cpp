#include "stable_sde/phi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "stable_sde/csv.hpp"
#include "stable_sde/error.hpp"

namespace stable_sde {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(double v) { return std::isfinite(v); }

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

PhiValidation affine_report(double a, double b, const char* name) {
  PhiValidation r;
  r.continuous = finite(a) && finite(b);
  if (!r.continuous) {
    r.reason = std::string(name) + ": non-finite parameter";
    return r;
  }
  r.non_decreasing = b >= 0.0;
  if (!r.non_decreasing) {
    r.reason = std::string(name) + ": slope parameter b < 0 makes phi decreasing";
    return r;
  }
  r.positive = a > 0.0;
  if (!r.positive) r.reason = std::string(name) + ": a <= 0 violates positivity";
  return r;
}

}  // namespace

PhiValidation validate(const PhiFamily& family) {
  using namespace phi_family;
  return std::visit(
      Overloaded{
          [](const Constant& f) {
            PhiValidation r;
            r.continuous = finite(f.a);
            r.non_decreasing = true;
            r.positive = r.continuous && f.a > 0.0;
            if (!r.continuous) {
              r.reason = "constant: non-finite parameter";
            } else if (!r.positive) {
              r.reason = "constant: a <= 0 violates positivity";
            }
            return r;
          },
          [](const ShiftedArctan& f) { return affine_report(f.a, f.b, "shifted-arctan"); },
          [](const SoftRamp& f) { return affine_report(f.a, f.b, "soft-ramp"); },
          [](const PiecewiseLinear& f) {
            PhiValidation r;
            if (f.knots.empty()) {
              r.reason = "piecewise-linear: no knots";
              return r;
            }
            for (const auto& [x, y] : f.knots) {
              if (!finite(x) || !finite(y)) {
                r.reason = "piecewise-linear: non-finite knot";
                return r;
              }
            }
            for (std::size_t i = 1; i < f.knots.size(); ++i) {
              if (!(f.knots[i].first > f.knots[i - 1].first)) {
                r.reason = "piecewise-linear: knot abscissae must be strictly increasing";
                return r;
              }
            }
            r.continuous = true;
            for (std::size_t i = 1; i < f.knots.size(); ++i) {
              if (f.knots[i].second < f.knots[i - 1].second) {
                r.reason = "piecewise-linear: decreasing segment violates monotonicity";
                return r;
              }
            }
            r.non_decreasing = true;
            // Infimum is the left-tail constant, the first knot value.
            r.positive = f.knots.front().second > 0.0;
            if (!r.positive) r.reason = "piecewise-linear: infimum <= 0 violates positivity";
            return r;
          },
          [](const Power& f) {
            PhiValidation r;
            if (!(f.beta > 0.0 && f.beta < 1.0)) {
              r.reason = "power: beta must lie in (0,1)";
              return r;
            }
            r.continuous = true;
            r.non_decreasing = true;
            r.positive = false;
            r.reason = "power: phi(0) = 0 violates positivity";
            return r;
          },
      },
      family);
}

MonotonePhi::MonotonePhi(PhiFamily family)
    : family_(std::move(family)), report_(validate(family_)) {
  if (!report_.continuous || !report_.non_decreasing) {
    throw InvalidArgument("invalid phi: " + report_.reason);
  }
}

double MonotonePhi::domain_min() const noexcept {
  return is_power() ? 0.0 : -std::numeric_limits<double>::infinity();
}

std::optional<double> MonotonePhi::supremum() const {
  using namespace phi_family;
  return std::visit(
      Overloaded{
          [](const Constant& f) -> std::optional<double> { return f.a; },
          [](const ShiftedArctan& f) -> std::optional<double> {
            return f.a + f.b * std::numbers::pi;
          },
          [](const SoftRamp& f) -> std::optional<double> {
            if (f.b == 0.0) return f.a;
            return std::nullopt;
          },
          [](const PiecewiseLinear& f) -> std::optional<double> {
            return f.knots.back().second;
          },
          [](const Power&) -> std::optional<double> { return std::nullopt; },
      },
      family_);
}

std::string MonotonePhi::to_string() const {
  using namespace phi_family;
  return std::visit(
      Overloaded{
          [](const Constant& f) { return "constant(" + shortest(f.a) + ")"; },
          [](const ShiftedArctan& f) {
            return "shifted-arctan(" + shortest(f.a) + "," + shortest(f.b) + ")";
          },
          [](const SoftRamp& f) {
            return "soft-ramp(" + shortest(f.a) + "," + shortest(f.b) + ")";
          },
          [](const PiecewiseLinear& f) {
            std::string s = "piecewise-linear(";
            for (std::size_t i = 0; i < f.knots.size(); ++i) {
              if (i) s += ",";
              s += shortest(f.knots[i].first) + ":" + shortest(f.knots[i].second);
            }
            return s + ")";
          },
          [](const Power& f) { return "power(" + shortest(f.beta) + ")"; },
      },
      family_);
}

double eval(const MonotonePhi& phi, double x) {
  using namespace phi_family;
  return std::visit(
      Overloaded{
          [](const Constant& f) { return f.a; },
          [x](const ShiftedArctan& f) {
            return f.a + f.b * (std::atan(x) + std::numbers::pi / 2.0);
          },
          [x](const SoftRamp& f) { return f.a + f.b * std::max(x, 0.0); },
          [x](const PiecewiseLinear& f) {
            const auto& k = f.knots;
            if (x <= k.front().first) return k.front().second;
            if (x >= k.back().first) return k.back().second;
            const auto it = std::upper_bound(
                k.begin(), k.end(), x,
                [](double v, const std::pair<double, double>& knot) { return v < knot.first; });
            const auto& [x1, y1] = *it;
            const auto& [x0, y0] = *(it - 1);
            const double w = (x - x0) / (x1 - x0);
            // Clamp guards against rounding pushing the blend outside [y0, y1].
            return std::clamp(y0 + w * (y1 - y0), y0, y1);
          },
          [x](const Power& f) {
            if (!(x >= 0.0)) {
              throw InvalidArgument("power phi is defined only for x >= 0, got " +
                                    csv::format_real(x));
            }
            return std::pow(x, f.beta);
          },
      },
      phi.family());
}

double eval_pow(const MonotonePhi& phi, double x, double exponent) {
  const double v = eval(phi, x);
  if (exponent == 1.0) return v;
  if (v == 0.0 && exponent < 0.0) {
    throw SingularClock("phi(" + csv::format_real(x) + ") = 0 raised to negative power " +
                        csv::format_real(exponent));
  }
  return std::pow(v, exponent);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '"' || c == '\''; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<double> parse_args(std::string_view args, std::size_t expected, std::string_view name) {
  std::vector<double> out;
  for (const auto& field : csv::split_row(args)) out.push_back(csv::parse_real(field));
  if (out.size() != expected) {
    throw InvalidArgument(std::string(name) + " expects " + std::to_string(expected) +
                          " argument(s)");
  }
  return out;
}

}  // namespace

MonotonePhi parse_phi(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw InvalidArgument("phi spec must look like name(args): '" + std::string(text) + "'");
  }
  const auto name = trim(text.substr(0, open));
  const auto args = text.substr(open + 1, text.size() - open - 2);

  if (name == "constant") {
    const auto v = parse_args(args, 1, name);
    return MonotonePhi::constant(v[0]);
  }
  if (name == "shifted-arctan") {
    const auto v = parse_args(args, 2, name);
    return MonotonePhi::shifted_arctan(v[0], v[1]);
  }
  if (name == "soft-ramp") {
    const auto v = parse_args(args, 2, name);
    return MonotonePhi::soft_ramp(v[0], v[1]);
  }
  if (name == "power") {
    const auto v = parse_args(args, 1, name);
    return MonotonePhi::power(v[0]);
  }
  if (name == "piecewise-linear") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& field : csv::split_row(args)) {
      const auto colon = field.find(':');
      if (colon == std::string::npos) {
        throw InvalidArgument("piecewise-linear knots must be written x:y");
      }
      knots.emplace_back(csv::parse_real(std::string_view(field).substr(0, colon)),
                         csv::parse_real(std::string_view(field).substr(colon + 1)));
    }
    return MonotonePhi::piecewise_linear(std::move(knots));
  }
  throw InvalidArgument("unknown phi family '" + std::string(name) + "'");
}

}  // namespace stable_sde
