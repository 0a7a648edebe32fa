#pragma once

#include <cstdint>

namespace hwmi {

// splitmix64 finalizer; stateless counter-based streams keep sampling
// reproducible regardless of evaluation order.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform draw in (0,1) for (seed, stream, counter).
inline double u01(uint64_t seed, uint64_t stream, uint64_t counter) {
    uint64_t h = mix64(mix64(mix64(seed) + stream) + counter);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace hwmi
