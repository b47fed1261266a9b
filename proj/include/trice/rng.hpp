#pragma once

#include <cstdint>

#include "trice/normal.hpp"

namespace trice {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// splitmix64 finalizer: a strong 64-bit bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive an independent substream seed from (seed, index).
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + (index + 1) * kGolden);
}

/// Counter-based RNG stream (splitmix64). Value i of a stream depends only on
/// (seed, i), so draws are reproducible and independent of scheduling as long
/// as callers key their streams deterministically.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return mix64(seed_ + (++counter_) * kGolden); }

    /// Uniform draw in the open interval (0, 1).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw via the inverse CDF.
    double next_normal() { return normal_quantile(next_uniform()); }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace trice
