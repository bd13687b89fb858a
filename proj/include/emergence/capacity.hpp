#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emergence/dist.hpp"
#include "emergence/errors.hpp"
#include "emergence/measures.hpp"
#include "emergence/model_space.hpp"
#include "emergence/rng.hpp"
#include "emergence/tpm.hpp"

namespace emergence {

struct CapacityResult {
    double capacity = 0.0;  // I(optimal_input; output) in bits
    Dist optimal_input;
    int iterations = 0;
    bool converged = false;
};

class NotConverged : public Error {
public:
    NotConverged(const std::string& what, CapacityResult best_so_far)
        : Error(what), best(std::move(best_so_far)) {}

    CapacityResult best;
};

namespace detail {

/// I(input; output) in bits through the channel rows, for any input vector.
inline double mutual_information_span(std::size_t n, std::span<const double> flat,
                                      std::span<const double> input,
                                      std::vector<double>& q_scratch) {
    q_scratch.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (input[i] == 0.0) continue;
        const double* row = flat.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) q_scratch[j] += input[i] * row[j];
    }
    double mi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (input[i] == 0.0) continue;
        const double* row = flat.data() + i * n;
        double d = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (row[j] > 0.0) d += row[j] * std::log2(row[j] / q_scratch[j]);
        }
        mi += input[i] * d;
    }
    return mi;
}

}  // namespace detail

/**
 * Channel capacity by the Blahut-Arimoto alternating maximization, started
 * from the uniform input. Convergence is declared when the standard
 * upper/lower capacity bounds close to within tol bits; the reported
 * capacity is the mutual information achieved by the returned input, so it
 * is always a feasible lower bound.
 */
inline CapacityResult blahut_arimoto(const Tpm& t, double tol = 1e-9,
                                     int max_iter = 10000) {
    if (tol <= 0.0) throw InvalidArgument("tolerance must be positive");
    const std::size_t n = t.n();
    const double ln2 = std::numbers::ln2;
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    std::vector<double> q(n), d(n);

    auto finish = [&](int iters, bool ok) {
        std::vector<double> scratch;
        CapacityResult r;
        r.capacity = detail::mutual_information_span(n, t.flat(), p, scratch);
        r.optimal_input = Dist(Dist::Unchecked{}, p);
        r.iterations = iters;
        r.converged = ok;
        return r;
    };

    if (n == 1) return finish(0, true);

    for (int it = 1; it <= max_iter; ++it) {
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = t.flat().data() + i * n;
            for (std::size_t j = 0; j < n; ++j) q[j] += p[i] * row[j];
        }
        double upper = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = t.flat().data() + i * n;
            double di = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (row[j] > 0.0) di += row[j] * std::log(row[j] / q[j]);
            }
            d[i] = di;
            upper = std::max(upper, di);
        }
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) z += p[i] * std::exp(d[i]);
        const double lower = std::log(z);
        for (std::size_t i = 0; i < n; ++i) p[i] = p[i] * std::exp(d[i]) / z;
        if (upper - lower < tol * ln2) return finish(it, true);
    }
    throw NotConverged("Blahut-Arimoto did not close the capacity bounds within " +
                           std::to_string(max_iter) + " iterations",
                       finish(max_iter, false));
}

/**
 * Capacity estimate in the style of a brute-force input search: seeded
 * random draws from the input simplex followed by greedy pairwise
 * mass-transfer hill climbing. Always a lower bound on the true capacity.
 */
inline CapacityResult capacity_random_search(const Tpm& t, int samples,
                                             std::uint64_t seed) {
    if (samples < 1) throw InvalidArgument("need at least one sample");
    const std::size_t n = t.n();
    Rng rng(derive_seed(seed, 0x9a7));
    std::vector<double> scratch;

    std::vector<double> best(n, 1.0 / static_cast<double>(n));
    double best_mi = detail::mutual_information_span(n, t.flat(), best, scratch);
    for (int s = 0; s < samples; ++s) {
        const std::vector<double> p = rng.dirichlet(n);
        const double mi = detail::mutual_information_span(n, t.flat(), p, scratch);
        if (mi > best_mi) {
            best_mi = mi;
            best = p;
        }
    }

    // local refinement: move mass between random coordinate pairs with a
    // shrinking step, keeping improvements
    std::vector<double> cand(n);
    for (double step = 0.2; step > 1e-5; step *= 0.25) {
        const int proposals = 64 * static_cast<int>(n);
        for (int k = 0; k < proposals; ++k) {
            const std::size_t i = rng.next_below(n);
            const std::size_t j = rng.next_below(n);
            if (i == j || best[i] == 0.0) continue;
            const double delta = std::min(step, best[i]);
            cand = best;
            cand[i] -= delta;
            cand[j] += delta;
            const double mi = detail::mutual_information_span(n, t.flat(), cand, scratch);
            if (mi > best_mi) {
                best_mi = mi;
                best.swap(cand);
            }
        }
    }

    CapacityResult r;
    r.capacity = best_mi;
    r.optimal_input = Dist(Dist::Unchecked{}, std::move(best));
    r.iterations = samples;
    r.converged = true;
    return r;
}

/// Deterministic preference order between model choices used to break EI
/// ties: fewest macrostates, then lexicographically smallest restricted
/// growth string, then smallest endogenous index sequence.
inline bool choice_preferred(const ModelChoice& a, const ModelChoice& b) {
    if (a.partition.m() != b.partition.m()) return a.partition.m() < b.partition.m();
    if (a.partition.assignment() != b.partition.assignment()) {
        return a.partition.assignment() < b.partition.assignment();
    }
    return a.endogenous < b.endogenous;
}

struct CausalCapacityResult {
    double cc = 0.0;
    ModelChoice best_choice;
    InterventionDist warped;
};

/**
 * Causal capacity over a supplied set of model choices: the maximum EI any
 * of them achieves. Bounded above by the channel capacity for every choice
 * set, because each macro model's EI is a mutual information through the
 * same channel.
 */
inline CausalCapacityResult causal_capacity(const Tpm& t,
                                            const std::vector<ModelChoice>& choices,
                                            double leak_tol = kProbTolerance) {
    if (choices.empty()) throw InvalidArgument("causal capacity needs at least one choice");
    CausalCapacityResult best;
    bool have = false;
    for (const auto& c : choices) {
        const double v = macro_ei(t, c, leak_tol).ei;
        if (!have || v > best.cc ||
            (v == best.cc && choice_preferred(c, best.best_choice))) {
            have = true;
            best.cc = v;
            best.best_choice = c;
        }
    }
    best.warped = warped_intervention(best.best_choice, t.n());
    return best;
}

struct EmergenceGap {
    double micro_ei = 0.0;
    double cc = 0.0;
    double capacity = 0.0;
    double emergence = 0.0;     // cc - micro_ei
    double capacity_gap = 0.0;  // capacity - cc
};

/// Assembles micro EI, causal capacity over the supplied choices (the micro
/// model is always included, so emergence is never negative), and the
/// Blahut-Arimoto channel capacity.
inline EmergenceGap emergence_gap(const Tpm& t, const std::vector<ModelChoice>& choices,
                                  double leak_tol = kProbTolerance) {
    EmergenceGap g;
    g.micro_ei = ei(t);
    std::vector<ModelChoice> all = choices;
    all.push_back(ModelChoice::identity(t.n()));
    g.cc = causal_capacity(t, all, leak_tol).cc;
    g.capacity = blahut_arimoto(t).capacity;
    g.emergence = g.cc - g.micro_ei;
    g.capacity_gap = g.capacity - g.cc;
    return g;
}

/// True when the rows are permutations of one another (as multisets, within
/// tol) and all column sums are equal; uniform input is then capacity
/// achieving, which precludes causal emergence.
inline bool is_weakly_symmetric(const Tpm& t, double tol = kProbTolerance) {
    const std::size_t n = t.n();
    std::vector<double> first(t.row(0).begin(), t.row(0).end());
    std::sort(first.begin(), first.end());
    std::vector<double> sorted(n);
    for (std::size_t i = 1; i < n; ++i) {
        sorted.assign(t.row(i).begin(), t.row(i).end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(sorted[j] - first[j]) > tol) return false;
        }
    }
    double col0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) col0 += t(i, 0);
    for (std::size_t j = 1; j < n; ++j) {
        double cj = 0.0;
        for (std::size_t i = 0; i < n; ++i) cj += t(i, j);
        if (std::abs(cj - col0) > tol) return false;
    }
    return true;
}

struct CodingResult {
    double rate = 0.0;               // bits sent per state transition
    double symbol_error_rate = 0.0;  // fraction of symbols decoded wrongly
    std::uint64_t transitions_used = 0;
};

/**
 * Sends a bit message through the TPM using the code a model choice defines:
 * each macrostate is one symbol, encoded as its lowest-index micro member
 * and decoded by partition membership of the observed output state. The
 * identity choice is the microscale code. Bits map to symbols MSB-first in
 * chunks of log2(#symbols); outputs are sampled with the seeded generator.
 */
inline CodingResult simulate_coding(const Tpm& t, const ModelChoice& c,
                                    const std::string& message_bits,
                                    std::uint64_t seed) {
    c.validate(t.n());
    const std::size_t m = static_cast<std::size_t>(c.partition.m());
    if (m < 2) throw InvalidArgument("a single-symbol code carries no information");
    if (!std::has_single_bit(m)) {
        throw AlphabetNotPowerOfTwo("code has " + std::to_string(m) +
                                    " symbols; whole bits per transition need a power of two");
    }
    const std::size_t bits = static_cast<std::size_t>(std::countr_zero(m));
    if (message_bits.empty() || message_bits.size() % bits != 0) {
        throw IndivisibleMessage("message length " + std::to_string(message_bits.size()) +
                                 " is not a multiple of " + std::to_string(bits));
    }

    std::vector<int> representative(m);
    const auto blocks = c.partition.blocks();
    for (std::size_t J = 0; J < m; ++J) {
        representative[J] = c.endogenous[blocks[J].front()];
    }
    std::vector<int> member_of(t.n(), -1);
    for (std::size_t pos = 0; pos < c.endogenous.size(); ++pos) {
        member_of[c.endogenous[pos]] = c.partition.block_of(pos);
    }

    Rng rng(seed);
    std::uint64_t errors = 0;
    const std::uint64_t transitions = message_bits.size() / bits;
    for (std::uint64_t s = 0; s < transitions; ++s) {
        std::size_t sym = 0;
        for (std::size_t b = 0; b < bits; ++b) {
            const char ch = message_bits[s * bits + b];
            if (ch != '0' && ch != '1') throw InvalidArgument("message must be 0/1 bits");
            sym = (sym << 1) | static_cast<std::size_t>(ch - '0');
        }
        const std::size_t y = rng.sample(t.row(representative[sym]));
        if (member_of[y] != static_cast<int>(sym)) ++errors;
    }

    CodingResult r;
    r.rate = static_cast<double>(bits);
    r.transitions_used = transitions;
    r.symbol_error_rate = static_cast<double>(errors) / static_cast<double>(transitions);
    return r;
}

/// Microscale code: one state per log2(n) bits.
inline CodingResult simulate_coding(const Tpm& t, const std::string& message_bits,
                                    std::uint64_t seed) {
    return simulate_coding(t, ModelChoice::identity(t.n()), message_bits, seed);
}

}  // namespace emergence
