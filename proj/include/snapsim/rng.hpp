#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "snapsim/errors.hpp"

namespace snapsim {

// Named, independently seeded random stream. The same (seed, stream_id) pair
// yields the same sample sequence on every platform: all variates are derived
// from raw mt19937_64 output by hand instead of going through
// std::*_distribution, whose outputs differ between standard libraries.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::string_view stream_id)
        : gen_(derive_seed(seed, stream_id)) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on the open interval (0, 1); never returns an exact endpoint,
    // so log()/pow() transforms below stay finite.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Inverse-CDF exponential with the given rate.
    double exponential(double rate) {
        if (rate <= 0.0) throw InvalidParametersError("exponential: rate must be > 0");
        return -std::log(uniform01()) / rate;
    }

    // Box-Muller, one variate per call (the sine branch is discarded so the
    // draw count per call is fixed).
    double normal(double mean, double sd) {
        double u1 = uniform01();
        double u2 = uniform01();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
        return mean + sd * z;
    }

    // Knuth's product method; above lambda = 500 exp(-lambda) underflows, so a
    // clamped normal approximation takes over.
    std::uint64_t poisson(double lambda) {
        if (lambda < 0.0) throw InvalidParametersError("poisson: lambda must be >= 0");
        if (lambda == 0.0) return 0;
        if (lambda > 500.0) {
            double x = normal(lambda, std::sqrt(lambda));
            return x <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(x));
        }
        double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

    // Unbiased integer in [0, n) via rejection on the top bits.
    std::uint32_t uniform_below(std::uint32_t n) {
        if (n == 0) throw InvalidParametersError("uniform_below: n must be > 0");
        std::uint64_t span = 0x100000000ull - (0x100000000ull % n);
        for (;;) {
            std::uint64_t x = next_u64() >> 32;
            if (x < span) return static_cast<std::uint32_t>(x % n);
        }
    }

  private:
    static std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream_id) {
        // FNV-1a over the stream name, mixed with the run seed via splitmix64.
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : stream_id) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        std::uint64_t z = seed ^ h;
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
};

} // namespace snapsim
