#include "stable_sde/random.hpp"

#include <cmath>

#include "stable_sde/error.hpp"

namespace stable_sde {

double Rng::exponential() { return -std::log(uniform_pos()); }

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw InvalidArgument("poisson: mean must be finite and non-negative");
  }
  if (mean == 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return static_cast<std::uint64_t>(dist(engine_));
}

}  // namespace stable_sde
