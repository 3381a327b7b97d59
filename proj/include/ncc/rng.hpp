#pragma once

#include <cstdint>
#include <random>

namespace ncc::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Hash a sequence of keys into one seed. Streams keyed by
/// (master seed, scenario id, replicate, purpose) are reproducible
/// regardless of the order in which replicates run.
template <class... Keys>
std::uint64_t derive_seed(std::uint64_t master, Keys... keys) {
    std::uint64_t h = splitmix64(master);
    ((h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(keys) + 0x632be59bd9b4e019ULL))), ...);
    return h;
}

using Engine = std::mt19937_64;

// Sub-stream tags.
inline constexpr std::uint64_t kPeriod1 = 1;
inline constexpr std::uint64_t kPeriod2 = 2;
inline constexpr std::uint64_t kBootstrap = 3;

}  // namespace ncc::rng
