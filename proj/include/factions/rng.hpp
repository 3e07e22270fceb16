#pragma once
// Portable random draws.
//
// std::mt19937_64 output is fully specified by the C++ standard, so results
// are bit-identical across platforms as long as we never touch the standard
// <random> distributions (whose algorithms are implementation-defined).
// Every draw used by the model goes through this header.

#include <cstdint>
#include <random>

namespace factions {

// SplitMix64 finalizer; a bijection on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1): top 53 bits of one 64-bit word.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform on the open interval (0, 1): resample the (measure ~2^-53)
    // exact zero so absorbing credences cannot appear in initial conditions.
    double uniform_open01() {
        double u = uniform01();
        while (u == 0.0) u = uniform01();
        return u;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Binomial(n, p) as a sum of n Bernoulli draws. Consumes exactly n words,
    // which keeps the draw schedule independent of p.
    int binomial(int n, double p) {
        int k = 0;
        for (int i = 0; i < n; ++i) k += bernoulli(p) ? 1 : 0;
        return k;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace factions
