#pragma once

#include <cstdint>
#include <string_view>

namespace profset {

/// SplitMix64 pseudo-random stream (Steele, Lea & Flood's mixer). The
/// algorithm is fixed so that draws are bit-identical on every platform;
/// standard-library distributions are deliberately avoided because their
/// outputs are implementation defined.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Unbiased draw in [0, bound) via rejection sampling. bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        // 2^64 mod bound == (2^64 - bound) mod bound without overflow.
        const std::uint64_t threshold = (0u - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Draw in [lo, hi] inclusive.
    std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Bernoulli draw with probability p given as a 53-bit fixed-point
    /// threshold (see probability_threshold). Exact for p = 0 and p = 1.
    bool next_bernoulli(std::uint64_t threshold_53bit) {
        return (next_u64() >> 11) < threshold_53bit;
    }

private:
    std::uint64_t state_;
};

/// Converts a probability in [0,1] to the 53-bit threshold used by
/// next_bernoulli. Deterministic for a given double value.
std::uint64_t probability_threshold(double p);

/// FNV-1a hash of a byte string, used to derive per-entity random streams.
std::uint64_t fnv1a64(std::string_view bytes);

/// Derives an independent stream seed from a global seed and an entity key
/// (e.g. a transaction id), so parallel schedules cannot affect results.
std::uint64_t derive_stream_seed(std::uint64_t global_seed, std::string_view key);

} // namespace profset
