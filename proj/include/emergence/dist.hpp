#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emergence/errors.hpp"

namespace emergence {

/// Tolerance for probability-vector and TPM-row normalization checks.
inline constexpr double kProbTolerance = 1e-9;

namespace detail {

/// Deterministic pairwise summation; order-independent of thread count
/// because it is always called on a fixed layout.
inline double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline void check_prob_vector(std::span<const double> p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i])) {
            throw NonFiniteEntry("non-finite probability at index " + std::to_string(i));
        }
        if (p[i] < 0.0) {
            throw InvalidDistribution("negative probability at index " + std::to_string(i));
        }
    }
    const double sum = pairwise_sum(p);
    if (std::abs(sum - 1.0) > kProbTolerance) {
        throw InvalidDistribution("probabilities sum to " + std::to_string(sum));
    }
}

/// Shannon entropy in bits of an unchecked probability vector.
inline double entropy_span(std::span<const double> p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

/// D_KL(p || q) in bits; throws when p has mass where q has none.
inline double kl_span(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw LengthMismatch("KL divergence length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            if (q[i] <= 0.0) throw AbsoluteContinuityViolation(i);
            d += p[i] * std::log2(p[i] / q[i]);
        }
    }
    return d;
}

/// Total variation distance, which is the earth mover's distance under the
/// unit ground metric on a discrete state set.
inline double tv_span(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw LengthMismatch("distance length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

}  // namespace detail

/**
 * Probability distribution over a finite state set.
 *
 * Entries are validated on construction: nonnegative, finite, and summing
 * to 1 within kProbTolerance. Values are immutable afterwards.
 */
class Dist {
public:
    Dist() = default;

    explicit Dist(std::vector<double> p) : p_(std::move(p)) {
        detail::check_prob_vector(p_);
    }

    static Dist uniform(std::size_t n) {
        if (n == 0) throw InvalidDistribution("empty support");
        return Dist(Unchecked{}, std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    static Dist delta(std::size_t n, std::size_t i) {
        if (i >= n) throw InvalidDistribution("delta index out of range");
        std::vector<double> p(n, 0.0);
        p[i] = 1.0;
        return Dist(Unchecked{}, std::move(p));
    }

    /// Trusted constructor for values produced internally (already stochastic).
    struct Unchecked {};
    Dist(Unchecked, std::vector<double> p) : p_(std::move(p)) {}

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    std::span<const double> span() const { return {p_.data(), p_.size()}; }
    const std::vector<double>& vec() const { return p_; }

    bool operator==(const Dist& other) const { return p_ == other.p_; }

private:
    std::vector<double> p_;
};

/// Intervention distributions live in the same representation; the alias
/// marks intent at call sites.
using InterventionDist = Dist;

/// Shannon entropy in bits, with 0 * log 0 taken as 0.
inline double entropy(const Dist& d) { return detail::entropy_span(d.span()); }

/// Kullback-Leibler divergence in bits. Mass of p outside the support of q
/// is an error rather than +infinity.
inline double kl_divergence(const Dist& p, const Dist& q) {
    return detail::kl_span(p.span(), q.span());
}

/// Earth mover's distance under the unit ground metric (distance 1 between
/// any two distinct states), which equals total variation distance.
inline double emd(const Dist& p, const Dist& q) {
    return detail::tv_span(p.span(), q.span());
}

}  // namespace emergence
