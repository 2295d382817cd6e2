#pragma once

// Seeded randomness helpers. Everything here is deterministic given the
// 64-bit seed, which is what the reproducibility contract of the simulator
// rests on: distribution algorithms are spelled out instead of delegated to
// std::<...>_distribution, whose output is implementation-defined.

#include <cmath>
#include <cstdint>
#include <random>

namespace qrb {

// splitmix64 step; used both as an RNG seeder and as a stream-derivation hash.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive an independent stream seed from a master seed and up to three
// coordinates (e.g. depth, circuit index). Chained splitmix so that distinct
// coordinate tuples give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix64(master ^ 0x6a09e667f3bcc909ULL);
    s = mix64(s ^ mix64(a));
    s = mix64(s ^ mix64(b ^ 0x3c6ef372fe94f82bULL));
    s = mix64(s ^ mix64(c ^ 0xa54ff53a5f1d36f1ULL));
    return s;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform integer in [0, n), n >= 1. Rejection sampling on the top bits
    // keeps the result exactly uniform.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return r % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; caches the second variate.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Number of successes in `trials` Bernoulli(p) draws.
    std::uint64_t binomial(std::uint64_t trials, double p) {
        if (p <= 0.0) return 0;
        if (p >= 1.0) return trials;
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < trials; ++i)
            if (uniform01() < p) ++hits;
        return hits;
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qrb
