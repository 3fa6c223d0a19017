#include "profset/rng.hpp"

#include <cmath>

#include "profset/errors.hpp"

namespace profset {

std::uint64_t probability_threshold(double p) {
    if (!(p >= 0.0) || p > 1.0)
        throw DataError("probability outside [0,1]: " + std::to_string(p));
    // 2^53 is exactly representable; the product rounds once, deterministically.
    return static_cast<std::uint64_t>(std::llround(p * 9007199254740992.0));
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t derive_stream_seed(std::uint64_t global_seed, std::string_view key) {
    SplitMix64 mix(global_seed ^ fnv1a64(key));
    mix.next_u64();
    return mix.next_u64();
}

} // namespace profset
