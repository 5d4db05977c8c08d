#pragma once

#include <cstdint>
#include <random>

namespace evsim {

/// Deterministic random source. All distributions are implemented by hand on
/// top of mt19937_64 so that a (seed, call sequence) pair yields the same
/// stream on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_gen(seed) {}

    std::uint64_t next_u64() { return m_gen(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform01()
    {
        return static_cast<double>(m_gen() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n); unbiased via rejection. n must be > 0.
    std::int64_t uniform_int(std::int64_t n);

    double normal(double mean, double sd);

    double lognormal(double log_mean, double log_sd)
    {
        return std::exp(normal(log_mean, log_sd));
    }

private:
    std::mt19937_64 m_gen;
};

/// splitmix64 mixer; used for counter-based (random access) noise streams.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic noise in [-1, 1) addressed by (seed, a, b) without any stream state.
double unit_noise(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

} // namespace evsim
