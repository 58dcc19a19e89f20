#pragma once

#include <cstdint>

namespace tailkit {

/// SplitMix64: tiny, platform-independent 64-bit generator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    /// Independent stream for a sub-task; depends only on the seed and the stream index.
    SplitMix64 split(std::uint64_t stream) const noexcept {
        SplitMix64 mixer(state_ ^ (stream * 0xD1B54A32D192ED03ULL));
        return SplitMix64(mixer.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace tailkit
