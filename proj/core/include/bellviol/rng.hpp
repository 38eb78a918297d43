#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace bellviol {

// SplitMix64 mixing step, used to turn (seed, stream) pairs into
// decorrelated engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded generator with deterministic substreams. child(k) depends only on
// the seed and k, never on how much the parent has been consumed, so
// parallel workers get reproducible streams regardless of scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    Rng child(std::uint64_t stream) const {
        return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x9d5c0d1f2e3a4b57ULL)));
    }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double gauss() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

    // Standard complex Gaussian: real and imaginary parts N(0, 1/2).
    std::complex<double> cgauss() {
        constexpr double inv_sqrt2 = 0.7071067811865476;
        const double re = gauss();
        const double im = gauss();
        return {re * inv_sqrt2, im * inv_sqrt2};
    }

    // Uniform element of {+1, -1}.
    int sign() { return (engine_() & 1u) ? -1 : 1; }

    // Uniform integer in [0, n).
    std::uint64_t integer(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace bellviol
