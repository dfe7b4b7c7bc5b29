#pragma once

#include <cstdint>
#include <random>

namespace swarm {

// Deterministic RNG. All distribution sampling is implemented here rather
// than with std:: distributions, whose output is implementation-defined;
// identical seeds must yield identical streams on every build.
class Rng {
 public:
    Rng() : engine_(0x9e3779b97f4a7c15ull) {}
    explicit Rng(uint64_t seed) : engine_(seed) {}

    void seed(uint64_t s) { engine_.seed(s); }

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform01() {
        return (engine_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Integer in [0, n).
    uint64_t uniform_index(uint64_t n) {
        // modulo bias is irrelevant at our n (<< 2^64) but reject anyway
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    // Box-Muller; draws two uniforms per call, spare discarded so the
    // stream position is a pure function of call count.
    double normal(double mean = 0.0, double std = 1.0) {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
        return mean + std * z;
    }

    uint64_t poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        // Knuth for small lambda; our densities give counts well under 100.
        double l = std::exp(-lambda);
        uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > l);
        return k - 1;
    }

    // Derive an independent stream; splitmix-style mix of (seed, salt...).
    static uint64_t derive(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
        uint64_t z = seed + 0x9e3779b97f4a7c15ull * (a + 1) + 0xbf58476d1ce4e5b9ull * (b + 1) +
                     0x94d049bb133111ebull * (c + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

 private:
    std::mt19937_64 engine_;
};

}  // namespace swarm
