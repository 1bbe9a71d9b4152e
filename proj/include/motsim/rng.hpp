#ifndef MOTSIM_RNG_HPP_
#define MOTSIM_RNG_HPP_

#include <cstdint>
#include <cmath>

#include "motsim/constants.hpp"

namespace motsim::rng {

// Counter-based generator (splitmix64 finalizer). Every draw is a pure
// function of (seed, stream, atom, counter), so trajectories do not
// depend on how atoms are partitioned across workers.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (splitmix64(b) + kGolden));
}

// Independent substream identifiers.
enum Stream : std::uint64_t {
    kInitPositions = 1,
    kInitVelocities = 2,
    kDynamics = 3,
    kShotNoise = 4,
};

class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t element)
        : base_(mix(mix(seed, stream), element)) {}

    // Uniform in (0, 1].
    double uniform(std::uint64_t n) const {
        const std::uint64_t bits = splitmix64(base_ + n * kGolden);
        return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller pair from counters 2n and 2n+1.
    void normal_pair(std::uint64_t n, double& a, double& b) const {
        const double u1 = uniform(2 * n);
        const double u2 = uniform(2 * n + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = constants::two_pi * u2;
        a = r * std::cos(phi);
        b = r * std::sin(phi);
    }

    double normal(std::uint64_t n) const {
        double a, b;
        normal_pair(n, a, b);
        return a;
    }

    // Poisson draw by inversion for small means, normal approximation
    // above 256 (adequate for synthetic shot noise).
    std::uint64_t poisson(std::uint64_t n, double mean) const {
        if (mean <= 0.0) return 0;
        if (mean > 256.0) {
            const double x = mean + std::sqrt(mean) * normal(n);
            return x < 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(x));
        }
        const double target = uniform(2 * n);
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (cdf < target && k < 100000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

private:
    std::uint64_t base_;
};

}  // namespace motsim::rng

#endif
