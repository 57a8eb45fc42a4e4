#pragma once

#include <cstdint>

namespace dpr {

// splitmix64: tiny deterministic generator with identical output on every
// platform. std::mt19937_64 would also be portable, but the std
// distributions are not, so all randomness in the project flows through
// this one stream plus the explicit mappings below.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1): top 53 bits scaled, exact on every IEEE platform.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) via rejection sampling.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::uint64_t state_;
};

// Derives an independent stream from a base seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    SplitMix64 rng(base ^ (0xA0761D6478BD642FULL * (stream + 1)));
    return rng.next_u64();
}

}  // namespace dpr
