#pragma once

#include <cstdint>
#include <random>

namespace uavsim {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; good avalanche, used only for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derive an independent stream seed from a base seed and a salt.
/// Equal (base, salt) pairs always give the same seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    return splitmix64(base ^ splitmix64(salt + 0xD1B54A32D192ED03ULL));
}

}  // namespace uavsim
