#pragma once

#include <array>
#include <cstdint>

namespace cpath {

/// Repo-wide random stream: xoshiro256** seeded through splitmix64.
///
/// The generator is pinned (never std::mt19937 or the OS default) so that
/// sampled paths, permutations and synthetic datasets reproduce bit-for-bit
/// from a 64-bit seed. Integer draws are platform-exact; normal() goes
/// through libm and is exact only per-platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Raw 64 random bits.
  std::uint64_t next();

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform();

  /// Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Bernoulli(prob) draw; consumes exactly one next() call.
  bool bernoulli(double prob);

  /// Normal(mean, sd) via Box-Muller; consumes exactly two next() calls.
  double normal(double mean, double sd);

  /// Independent substream id for (seed, stream) pairs, e.g. one stream per
  /// path-sampling iteration or per tree, so work items can run in any order.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace cpath
