#pragma once

#include <cstdint>

namespace gksl {

// Self-contained splitmix64 stream. Used instead of <random> engines so that
// Monte Carlo sample streams are identical across standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Block seeding: hash(seed, block_index). Every MC engine derives per-block
// streams from this so results do not depend on the worker count.
inline std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block_index) {
    SplitMix64 h(seed ^ (0xD1B54A32D192ED03ULL * (block_index + 1)));
    return h.next_u64();
}

}  // namespace gksl
