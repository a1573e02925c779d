#pragma once

#include <array>
#include <cstdint>

namespace kitaev {

/// xoshiro256++ seeded through splitmix64. Self-contained so that seeded
/// runs are bit-for-bit reproducible across platforms and standard library
/// versions (std::mt19937 streams are portable but distributions are not).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            // splitmix64 step
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    auto next() -> std::uint64_t {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    auto uniform() -> double { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    auto uniform(double lo, double hi) -> double { return lo + (hi - lo) * uniform(); }

  private:
    static auto rotl(std::uint64_t v, int k) -> std::uint64_t { return (v << k) | (v >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace kitaev
