#pragma once

#include <stdexcept>
#include <string>

namespace stable_sde {

/// Precondition or domain violation in a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// φ(x) = 0 was raised to a negative power. Only the counterexample lab is
/// allowed to see this; everywhere else it is fatal.
class SingularClock : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A solver produced a non-finite state. Carries the offending time and value.
class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(double time, double value, const std::string& what)
      : std::runtime_error(what), time_(time), value_(value) {}
  double time() const noexcept { return time_; }
  double value() const noexcept { return value_; }

 private:
  double time_;
  double value_;
};

/// The exact-increment sampler returned a value that cannot come from a
/// stable subordinator (e.g. zero at a positive time after underflow).
class SamplerIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stable_sde
