#pragma once

#include <cstdint>

namespace opacity {

/// Counter-based splittable PRNG (splitmix64 core). All benchmark families
/// draw from this generator so instances are bit-identical across platforms;
/// std:: distributions are implementation-defined and must not be used here.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    /// Derives an independent stream; (key, salt) -> new key is a pure function.
    Rng split(std::uint64_t salt) const { return Rng(mix(key_ + 0x632be59bd9b4e019ull * (salt + 1))); }

    std::uint64_t next() {
        counter_ += 0x9e3779b97f4a7c15ull;
        return mix(key_ ^ counter_);
    }

    /// Uniform in [0, bound). bound = 0 returns 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        // multiply-shift reduction; bias is negligible for our bounds
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace opacity
