// Counter-based deterministic random number generation.
//
// Draw k of a stream is a pure function of (seed, k): the SplitMix64
// finalizer is applied to seed + (k + 1) * golden-gamma.  Streams can
// therefore be produced in any order or chunking and always agree, which
// is what makes the Monte Carlo results bit-reproducible per (seed, n).

#pragma once

#include <cstdint>

namespace cquant {

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    // Uniform draw number k, in the open interval (0, 1).
    double uniform(std::uint64_t k) const {
        std::uint64_t z = seed_ + (k + 1) * golden_gamma;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        // top 53 bits, centred on the lattice: never exactly 0 or 1
        return (static_cast<double>(z >> 11) + 0.5) * 0x1p-53;
    }

    std::uint64_t seed() const { return seed_; }

  private:
    static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t seed_;
};

} // namespace cquant
