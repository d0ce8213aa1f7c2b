#pragma once

#include <cstdint>
#include <random>

namespace qkd {

/// Random stream for one simulated round.
///
/// Each round gets its own engine keyed by (master seed, round index), so a
/// round's draws do not depend on which worker evaluates it or in what order.
/// Doubles are built from the top 53 bits of the engine output rather than
/// std::uniform_real_distribution, whose algorithm is implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  static RandomStream for_round(std::uint64_t master_seed, std::uint64_t round_index);

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int bit() { return static_cast<int>(engine_() >> 63); }
  bool bernoulli(double p) { return uniform() < p; }
  /// 1 or 2 with equal probability.
  int subspace() { return 1 + bit(); }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive well-separated per-round seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace qkd
