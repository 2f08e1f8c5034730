#pragma once

#include <cstdint>
#include <random>

namespace ffsim::simnet {

/// The single scenario-seeded random stream. Draw order is part of the
/// determinism contract: every frame transmission draws exactly twice, loss
/// first, then jitter, regardless of the configured loss/jitter values.
/// Uniform doubles are derived from raw mt19937_64 output so results are
/// identical across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [-1, 1).
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

private:
  std::mt19937_64 engine_;
};

}  // namespace ffsim::simnet
