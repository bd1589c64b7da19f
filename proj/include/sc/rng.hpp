#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sc {

// Deterministic random stream.  All randomized routines in the library take
// either an explicit seed or an rng reference, so results are reproducible
// bit-for-bit for a fixed seed.  Gaussian variates are produced by an
// explicit Box-Muller transform on mt19937_64 output rather than
// std::normal_distribution, whose output sequence is implementation-defined.
class rng {
  public:
    explicit rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // rejection sampling to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Child stream with a seed derived by fixed arithmetic; used to give
    // optimizer restarts independent but reproducible randomness.
    rng derive(std::uint64_t salt) const {
        std::uint64_t x = seed_mix_ ^ (0x9e3779b97f4a7c15ULL + salt * 0xbf58476d1ce4e5b9ULL);
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return rng(x);
    }

    static rng derived(std::uint64_t seed, std::uint64_t salt) {
        rng r(seed);
        return r.derive(salt);
    }

  private:
    std::mt19937_64 gen_;
    std::uint64_t seed_mix_ = gen_();  // consumed once, decorrelates derive()
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace sc
