#pragma once

#include <cmath>
#include <cstdint>

namespace eib {

// SplitMix64 generator. Chosen over the standard-library engines because the
// whole simulation stack promises bit-reproducible datasets from a seed, and
// std::binomial_distribution / std::normal_distribution are not specified
// tightly enough to guarantee identical streams across library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box-Muller. Always consumes exactly two uniforms so
    // the stream position does not depend on call history.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 == 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Exact inversion sampling; fine for the per-precinct counts used here.
    // Mirroring at q > 1/2 keeps the pmf recurrence well conditioned.
    std::uint64_t binomial(std::uint64_t n, double q) {
        if (n == 0 || q <= 0.0) return 0;
        if (q >= 1.0) return n;
        if (q > 0.5) return n - binomial(n, 1.0 - q);
        double u = uniform();
        double ratio = q / (1.0 - q);
        double pmf = std::pow(1.0 - q, static_cast<double>(n));
        double cdf = pmf;
        std::uint64_t k = 0;
        while (u > cdf && k < n) {
            pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
            cdf += pmf;
            ++k;
        }
        return k;
    }

    // Independent child seed for stream `index` (per precinct, per
    // replication, ...). Pure function of (seed, index).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

}  // namespace eib
