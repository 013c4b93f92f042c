#pragma once

#include "nid/complex.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace nid {

/// Named substreams so that every random choice of a run is a pure function
/// of the run seed, independent of scheduling.
enum class Stream : std::uint64_t {
    squaring = 1,
    embedding = 2,
    lifting = 3,
    start_system = 4,
    top_gamma = 5,
    cascade_gamma = 6,
    membership = 7,
    sampling = 8,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded 64-bit Mersenne twister with splittable substreams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    Rng split(std::uint64_t tag) const { return Rng(splitmix64(seed_ ^ splitmix64(tag + 0x51ed270b27ULL))); }
    Rng split(Stream s) const { return split(static_cast<std::uint64_t>(s)); }
    Rng split(Stream s, std::uint64_t index) const { return split(s).split(index); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

    /// Uniform in the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1p-52; }

    ComplexD unit_complex()
    {
        double a = 2.0 * std::numbers::pi * uniform();
        return {std::cos(a), std::sin(a)};
    }

    /// Uniform angle, modulus uniform in (0.5, 1.5).
    ComplexD random_constant()
    {
        ComplexD u = unit_complex();
        double m = 0.5 + uniform_open();
        return {u.re * m, u.im * m};
    }

    std::uint64_t next() { return engine_(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace nid
