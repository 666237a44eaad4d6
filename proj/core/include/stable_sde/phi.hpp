#pragma once

// Coefficient functions φ for dX = φ(X⁻) dZ.
//
// Only closed families are offered; continuity and monotonicity hold by
// construction, so the three clauses of the standing assumption (continuous,
// non-decreasing, positive on ℝ) can be checked exactly from the parameters.
// The power family x ↦ x^β is the deliberate exception: φ(0) = 0.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace stable_sde {

namespace phi_family {

struct Constant {
  double a;
};
/// x ↦ a + b·(atan(x) + π/2)
struct ShiftedArctan {
  double a;
  double b;
};
/// x ↦ a + b·max(x, 0)
struct SoftRamp {
  double a;
  double b;
};
/// Linear interpolation through (x_i, y_i); constant beyond the outer knots.
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> knots;
};
/// x ↦ x^β on [0, ∞), β ∈ (0,1).
struct Power {
  double beta;
};

}  // namespace phi_family

using PhiFamily = std::variant<phi_family::Constant, phi_family::ShiftedArctan,
                               phi_family::SoftRamp, phi_family::PiecewiseLinear,
                               phi_family::Power>;

struct PhiValidation {
  bool continuous = false;
  bool non_decreasing = false;
  bool positive = false;
  /// First failing clause, empty when all hold.
  std::string reason;

  bool assumption_ok() const noexcept { return continuous && non_decreasing && positive; }
};

/// Checks the three clauses for a family. Never throws.
PhiValidation validate(const PhiFamily& family);

class MonotonePhi {
 public:
  /// Throws InvalidArgument when continuity or monotonicity fails (malformed
  /// parameters, unsorted or decreasing knots). A positivity failure is
  /// recorded, not thrown: see assumption_ok().
  explicit MonotonePhi(PhiFamily family);

  static MonotonePhi constant(double a) { return MonotonePhi(phi_family::Constant{a}); }
  static MonotonePhi shifted_arctan(double a, double b) {
    return MonotonePhi(phi_family::ShiftedArctan{a, b});
  }
  static MonotonePhi soft_ramp(double a, double b) {
    return MonotonePhi(phi_family::SoftRamp{a, b});
  }
  static MonotonePhi piecewise_linear(std::vector<std::pair<double, double>> knots) {
    return MonotonePhi(phi_family::PiecewiseLinear{std::move(knots)});
  }
  static MonotonePhi power(double beta) { return MonotonePhi(phi_family::Power{beta}); }

  const PhiFamily& family() const noexcept { return family_; }
  const PhiValidation& report() const noexcept { return report_; }
  bool assumption_ok() const noexcept { return report_.assumption_ok(); }
  bool is_power() const noexcept { return std::holds_alternative<phi_family::Power>(family_); }

  /// Lower end of the domain: -inf, or 0 for the power family.
  double domain_min() const noexcept;

  /// sup φ over the domain when finite.
  std::optional<double> supremum() const;

  /// Canonical config-string form, parseable by parse_phi().
  std::string to_string() const;

 private:
  PhiFamily family_;
  PhiValidation report_;
};

/// φ(x). Throws InvalidArgument for x outside the domain (x < 0 for power).
double eval(const MonotonePhi& phi, double x);

/// φ(x)^exponent. Throws SingularClock when φ(x) = 0 and exponent < 0.
double eval_pow(const MonotonePhi& phi, double x, double exponent);

/// Parses `constant(a)`, `shifted-arctan(a,b)`, `soft-ramp(a,b)`,
/// `piecewise-linear(x1:y1,x2:y2,...)` and `power(beta)`. Surrounding quotes
/// and whitespace are ignored.
MonotonePhi parse_phi(std::string_view text);

}  // namespace stable_sde
