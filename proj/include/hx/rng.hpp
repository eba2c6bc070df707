#pragma once

#include <cstdint>

// Self-contained generator so that seeded runs are byte-reproducible across
// platforms and standard-library versions.  splitmix64 both advances state
// and derives independent child seeds.

namespace hx {

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    Rng child(std::uint64_t stream) const {
        Rng r(state ^ (0x6a09e667f3bcc909ULL + stream * 0x3c6ef372fe94f82bULL));
        r.next_u64();
        return r;
    }
};

}  // namespace hx
