#pragma once

#include <cstdint>
#include <random>

namespace hyperaug {

using Seed = std::uint64_t;

/// SplitMix64 finalizer. Bijective on 64-bit values.
Seed mix64(Seed x) noexcept;

/// Folds `value` into `state`: mix64(state ^ value).
inline Seed fold_seed(Seed state, std::uint64_t value) noexcept { return mix64(state ^ value); }

/// Seeded random stream with a portable, fully specified output sequence.
///
/// Built on std::mt19937_64, whose output is fixed by the standard. The
/// standard distributions are implementation-defined, so the conversions to
/// uniform doubles, bounded integers, and Gaussians are done here:
///   uniform01  = (engine() >> 11) * 2^-53, in [0, 1)
///   below(n)   = rejection sampling on the top of the 64-bit range
///   gaussian() = Marsaglia polar method; each accepted pair of uniforms
///                yields two variates
class Rng {
public:
  explicit Rng(Seed seed) : engine_(seed) {}

  double uniform01() noexcept;
  /// Uniform in [lo, hi); returns lo exactly when lo == hi.
  double uniform(double lo, double hi) noexcept;
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Standard normal variate.
  double gaussian() noexcept;

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hyperaug
