#ifndef VIRGEO_PRNG_HPP
#define VIRGEO_PRNG_HPP

#include <cstdint>
#include <string>

namespace virgeo {

/// Deterministic splitmix64 stream.  Used instead of <random> so that
/// seeded reports are byte-identical across platforms and toolchains.
class Prng {
public:
    explicit Prng(uint64_t seed) : state_(seed) {}

    /// Independent substream derived from a label, so checks get stable
    /// randomness regardless of execution order.
    Prng fork(const std::string& label) const {
        uint64_t h = state_ ^ 0x9e3779b97f4a7c15ull;
        for (unsigned char c : label) h = (h ^ c) * 0x100000001b3ull;
        return Prng(h);
    }

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [lo, hi] inclusive.
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
    }

private:
    uint64_t state_;
};

} // namespace virgeo

#endif
