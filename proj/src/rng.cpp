#include "qtraj/rng.hpp"

#include <cmath>
#include <numbers>

namespace qtraj {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

Rng Rng::substream(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t state = master_seed;
    std::uint64_t a = splitmix64(state);
    state ^= index * 0xda942042e4dd58b5ull + 0x2545f4914f6cdd1dull;
    std::uint64_t b = splitmix64(state);
    return Rng(a ^ (b + 0x9e3779b97f4a7c15ull));
}

Real Rng::uniform01() {
    return static_cast<Real>(engine_() >> 11) * 0x1.0p-53;
}

Real Rng::gaussian() {
    const Real u1 = uniform01();
    const Real u2 = uniform01();
    return std::sqrt(-2.0 * std::log1p(-u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

Real Rng::exponential(Real rate) {
    return -std::log1p(-uniform01()) / rate;
}

}  // namespace qtraj
