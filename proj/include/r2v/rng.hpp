#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace r2v {

// splitmix64, used to decorrelate seed substreams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// All randomness in the library flows from a root seed through named
// substreams, so that e.g. walk simulation and negative sampling stay
// reproducible independently of each other.
inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view name,
                                    std::uint64_t index = 0) {
    return splitmix64(splitmix64(seed ^ fnv1a(name)) + index);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::string_view name,
                                std::uint64_t index = 0) {
    return std::mt19937_64(substream_seed(seed, name, index));
}

}  // namespace r2v
