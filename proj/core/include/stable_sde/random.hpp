#pragma once

#include <cstdint>
#include <random>

namespace stable_sde {

/// Tags that separate independent random streams belonging to the same
/// replicate. Values are part of the seeding contract; never renumber.
enum class StreamTag : std::uint64_t {
  driver = 1,         // primary driving path
  secondary = 2,      // independent second driver (weak-agreement, scaling)
  reference = 3,      // reference samples drawn for a distributional test
  resample = 4,       // anything else drawn by a test harness
};

/// Stateless 64-bit avalanche mix (the splitmix64 finalizer). Bijective.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for replicate `replicate` of stream `tag` under `master`.
///
///   derive_seed(m, i, g) = mix64(mix64(mix64(m) ^ i) ^ (g * 0xd1b54a32d192ed03))
///
/// Each stage is a bijection of its 64-bit input, so for a fixed master and tag
/// distinct replicates never collide. This formula is stable across versions.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate,
                                    StreamTag tag) noexcept {
  const auto t = static_cast<std::uint64_t>(tag) * 0xd1b54a32d192ed03ULL;
  return mix64(mix64(mix64(master) ^ replicate) ^ t);
}

/// Seeded random stream. Wraps std::mt19937_64 (whose output sequence is fixed
/// by the standard) and derives real variates from raw bits so results do not
/// depend on the standard library's distribution implementations, except for
/// poisson() which uses std::poisson_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exp(1).
  double exponential();

  /// Poisson(mean); mean >= 0.
  std::uint64_t poisson(double mean);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stable_sde
