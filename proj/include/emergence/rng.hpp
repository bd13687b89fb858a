#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "emergence/errors.hpp"

namespace emergence {

/// SplitMix64 mixing step; used to derive independent seed streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream + 1));
}

/**
 * Seeded random source with portable output.
 *
 * The engine is std::mt19937_64, whose sequence is fixed by the standard;
 * all sampling on top of it is hand-rolled here because the standard
 * distribution objects are not specified bit-exactly. Identical seeds give
 * identical draws on every platform.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double next_unit() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection (no modulo bias).
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw InvalidArgument("next_below(0)");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % bound;
    }

    bool next_bool(double p) { return next_unit() < p; }

    /// Samples an index from a probability vector by CDF inversion.
    std::size_t sample(std::span<const double> probs) {
        const double u = next_unit();
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return i;
        }
        return probs.size() - 1;  // guard against accumulated rounding
    }

    /// Uniform draw from the probability simplex (Dirichlet(1,...,1)), via
    /// exponential spacings.
    std::vector<double> dirichlet(std::size_t n) {
        std::vector<double> e(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double u;
            do {
                u = next_unit();
            } while (u == 0.0);
            e[i] = -std::log(u);
            sum += e[i];
        }
        for (double& x : e) x /= sum;
        return e;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace emergence
