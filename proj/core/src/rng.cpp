#include "evsim/rng.hpp"

#include <cmath>

#include "evsim/errors.hpp"

namespace evsim {

std::int64_t Rng::uniform_int(std::int64_t n)
{
    if (n <= 0) {
        throw InternalError("uniform_int requires n > 0");
    }
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = m_gen();
    } while (x >= limit);
    return static_cast<std::int64_t>(x % bound);
}

double Rng::normal(double mean, double sd)
{
    // Box-Muller; the second variate is discarded to keep the stream position
    // a pure function of the call count.
    double u1;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_noise(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
{
    const std::uint64_t h = splitmix64(seed ^ splitmix64(a ^ splitmix64(b)));
    return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

} // namespace evsim
