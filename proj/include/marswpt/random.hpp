#pragma once

#include <cstdint>
#include <limits>

namespace marswpt {

/// xoshiro256** seeded through SplitMix64.
///
/// Every Monte Carlo sample owns a stream derived from (seed, sample index),
/// so results do not depend on how samples are scheduled across threads.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  /// Independent stream for sample `index` of a run seeded with `seed`.
  static Rng for_sample(std::uint64_t seed, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace marswpt
