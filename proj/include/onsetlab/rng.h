//
//  rng.h
//  onsetlab
//
//  Seeded random source with platform-independent draws. The standard
//  distributions are implementation-defined, so everything that has to
//  reproduce bit-for-bit across toolchains goes through this class.
//

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace onsetlab {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller; the spare value is cached.
    double normal();

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    /// Exponential with the given rate (events per unit).
    double exponential(double rate);

    bool bernoulli(double p) { return uniform() < p; }

    /// Fisher-Yates permutation of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace onsetlab
