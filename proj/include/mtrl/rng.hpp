#pragma once

#include <cstdint>
#include <random>

namespace mtrl {

// Seeded random source with platform-independent output. std::mt19937_64
// produces a portable bit stream; the conversions below avoid the
// implementation-defined behaviour of the <random> distribution classes so
// that traces are reproducible byte-for-byte everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1) with 53-bit resolution
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // unbiased uniform integer in [0, n), n >= 1
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

    // derives an independent child stream; advances this stream once
    Rng fork() { return Rng(gen_() ^ 0x9e3779b97f4a7c15ULL); }

private:
    std::mt19937_64 gen_;
};

}  // namespace mtrl
