#pragma once

#include <cmath>
#include <cstdint>

#include "afc/units.hpp"

// Counter-based random streams. Every draw is a pure function of
// (seed, index), so ensembles come out bit-identical no matter how the
// work is split across threads.
namespace afc {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1]; never returns 0 so it is safe under log().
    double next_unit() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }
};

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 s(seed ^ (0x2545f4914f6cdd1dULL * (index + 1)));
    return s.next();
}

// One standard-normal draw per (seed, index), Box-Muller cosine branch.
inline double normal_draw(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 s(stream_seed(seed, index));
    const double u1 = s.next_unit();
    const double u2 = s.next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

inline double uniform_draw(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 s(stream_seed(seed, index));
    return s.next_unit();
}

}  // namespace afc
