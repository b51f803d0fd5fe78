#pragma once

#include <cstdint>
#include <cmath>

namespace kakeya {

// Deterministic, platform-independent generators. std::uniform_*_distribution
// is implementation-defined, so all sampling goes through these helpers.

inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless mix of two 64-bit values into a stream key.
inline uint64_t mix_key(uint64_t a, uint64_t b) {
    uint64_t s = a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2) + b);
    splitmix64_next(s);
    return splitmix64_next(s);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {
        // warm up so nearby seeds decorrelate
        splitmix64_next(state_);
        splitmix64_next(state_);
    }

    uint64_t next_u64() { return splitmix64_next(state_); }

    // uniform in [0, 1)
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // uniform integer in [0, n)
    uint64_t index(uint64_t n) { return n ? next_u64() % n : 0; }

private:
    uint64_t state_;
};

// Additive low-discrepancy sequence in [0,1)^2 (plastic-constant rotation),
// Cranley-Patterson shifted by a seed-derived offset.
class Quasi2d {
public:
    explicit Quasi2d(uint64_t stream_key) {
        uint64_t s = stream_key;
        ox_ = static_cast<double>(splitmix64_next(s) >> 11) * 0x1.0p-53;
        oy_ = static_cast<double>(splitmix64_next(s) >> 11) * 0x1.0p-53;
    }

    void next(double& x, double& y) {
        ++n_;
        x = frac(ox_ + kA1 * static_cast<double>(n_));
        y = frac(oy_ + kA2 * static_cast<double>(n_));
    }

private:
    static double frac(double t) { return t - std::floor(t); }
    static constexpr double kA1 = 0.7548776662466927;  // 1/phi2
    static constexpr double kA2 = 0.5698402909980532;  // 1/phi2^2
    double ox_ = 0.0, oy_ = 0.0;
    uint64_t n_ = 0;
};

}  // namespace kakeya
