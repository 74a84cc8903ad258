#pragma once

// Reproducible randomness.  Every path owns a substream derived from
// (master seed, path index) via SplitMix64 mixing into a mt19937_64.
// The documented transforms are:
//   uniform01: (x >> 11) * 2^-53, in [0, 1)
//   gaussian:  Box-Muller, z = sqrt(-2 ln(1-u1)) * cos(2 pi u2),
//              consuming exactly two uniforms per normal (no caching)
//   exponential(rate): -ln(1-u) / rate, one uniform
// The cross-implementation contract is the consumption order, with these
// transforms fixed so streams can be matched bit-for-bit.

#include <cstdint>
#include <random>

#include "qtraj/types.hpp"

namespace qtraj {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Substream for path `index` under `master_seed`.
    static Rng substream(std::uint64_t master_seed, std::uint64_t index);

    Real uniform01();
    /// Uniform on [0, scale).
    Real uniform(Real scale) { return scale * uniform01(); }
    Real gaussian();
    Real exponential(Real rate);

  private:
    std::mt19937_64 engine_;
};

}  // namespace qtraj
