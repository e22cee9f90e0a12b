#pragma once

#include <cstdint>

namespace fqdescent {

/// SplitMix64. Used everywhere a seeded, reproducible stream is needed so
/// that identical seeds give identical results on every platform
/// (std::mt19937 distributions are not portable across standard libraries).
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection sampling keeps the distribution exactly uniform.
        std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

   private:
    std::uint64_t state_;
};

}  // namespace fqdescent
