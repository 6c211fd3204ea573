#pragma once

#include <cstdint>
#include <random>

namespace opinion {

/// Seeded generator whose draws are identical on every platform: the engine
/// is mt19937_64 and the transforms below avoid the implementation-defined
/// standard distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal via Box-Muller.
  double normal();

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace opinion
