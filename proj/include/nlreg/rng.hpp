#ifndef NLREG_RNG_HPP
#define NLREG_RNG_HPP

#include <cmath>
#include <cstdint>

namespace nlreg {

/// SplitMix64 (Steele, Lea & Flood 2014) evaluated in counter mode: the
/// i-th output is a pure function of (seed, i), so streams with distinct
/// seeds are independent by construction and every output sequence is
/// bit-identical across platforms. All simulation randomness in the
/// library flows through this generator; nothing reads ambient entropy.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (lo, hi).
    double next_uniform(double lo, double hi) {
        double u;
        do {
            u = next_double();
        } while (u == 0.0);
        return lo + (hi - lo) * u;
    }

    /// Standard normal via Box-Muller (two uniforms per draw, no cache).
    double next_normal() {
        double u1;
        do {
            u1 = next_double();
        } while (u1 == 0.0);
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Gamma(shape, scale) via Marsaglia-Tsang squeeze; shape < 1 handled
    /// by the u^(1/shape) boost.
    double next_gamma(double shape, double scale) {
        if (shape < 1.0) {
            double u;
            do {
                u = next_double();
            } while (u == 0.0);
            return next_gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = next_normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = next_double();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v * scale;
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace nlreg

#endif
