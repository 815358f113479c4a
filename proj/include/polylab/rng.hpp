#pragma once

#include <cstdint>
#include <string_view>

namespace polylab {

// Counter-free xoshiro256** generator with explicit, platform-independent
// seeding. Replication seeds are derived from (master seed, stream label, n,
// replication index) so that results never depend on worker scheduling.
class Rng {
public:
    explicit Rng(uint64_t seed) { reseed(seed); }

    void reseed(uint64_t seed);

    uint64_t next_u64();

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Integer in [0, m).
    uint64_t below(uint64_t m) { return next_u64() % m; }

    // Standard normal via Box-Muller (one value per call, no caching, so the
    // consumption pattern is explicit and reproducible).
    double normal();

private:
    uint64_t s_[4];
};

uint64_t splitmix64(uint64_t& state);
uint64_t fnv1a64(std::string_view s);

// 128+ bit mix of (master, label, n, rep) collapsed into a 64-bit stream seed;
// see Rng::reseed for how it expands back to 256 bits of state.
uint64_t derive_seed(uint64_t master, std::string_view label, uint64_t n, uint64_t rep);

}  // namespace polylab
