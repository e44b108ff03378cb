#pragma once

#include <cstdint>
#include <initializer_list>

namespace dmsec {

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed of the substream addressed by a counter path below a master seed,
// e.g. {sweep point, trial block}. Independent of evaluation order.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(master);
    for (const std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p));
    return h;
}

}  // namespace dmsec
