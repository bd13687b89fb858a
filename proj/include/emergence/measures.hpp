#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "emergence/dist.hpp"
#include "emergence/errors.hpp"
#include "emergence/tpm.hpp"

namespace emergence {

/**
 * Effective information and its decomposition for one causal model.
 *
 * All information quantities are in bits. effectiveness is always
 * determinism - degeneracy, and ei == size * effectiveness holds by the
 * decomposition identity (for any intervention distribution, since the
 * effect distribution is formed with the same weights).
 */
struct CausalReport {
    double ei = 0.0;
    std::vector<double> effect_info_per_state;  // 0.0 for states outside the support
    double determinism = 0.0;
    double degeneracy = 0.0;
    double effectiveness = 0.0;
    double size = 0.0;                  // log2(n)
    double intervention_entropy = 0.0;  // H(I_D)
};

namespace detail {

/// E_D[j] = sum_i id[i] * rows[i][j], written into out.
inline void effect_distribution_span(std::size_t n, std::span<const double> flat,
                                     std::span<const double> id, std::span<double> out) {
    for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = id[i];
        if (w == 0.0) continue;
        const double* row = flat.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) out[j] += w * row[j];
    }
}

/// EI under a uniform intervention over the row index, given scratch for E_D.
inline double ei_uniform_from_rows(std::size_t m, std::span<const double> rows,
                                   std::span<double> ed) {
    if (m <= 1) return 0.0;
    const double w = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) ed[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = rows.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) ed[j] += w * row[j];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = rows.data() + i * m;
        double d = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (row[j] > 0.0) d += row[j] * std::log2(row[j] / ed[j]);
        }
        total += w * d;
    }
    return total;
}

}  // namespace detail

/// The effect distribution E_D: the state distribution at t+1 induced by
/// applying the intervention distribution through the TPM.
inline Dist effect_distribution(const Tpm& t, const InterventionDist& id) {
    if (id.size() != t.n()) throw LengthMismatch("intervention length != state count");
    std::vector<double> ed(t.n());
    detail::effect_distribution_span(t.n(), t.flat(), id.span(), ed);
    return Dist(Dist::Unchecked{}, std::move(ed));
}

/// Effect information of a single state: D_KL(row_i || E_D), the difference
/// that intervening into s_i makes to the future of the system.
inline double effect_information(const Tpm& t, std::size_t state,
                                 const InterventionDist& id) {
    if (state >= t.n()) throw InvalidArgument("state index out of range");
    if (id[state] <= 0.0) throw StateOutsideSupport(state);
    const Dist ed = effect_distribution(t, id);
    return detail::kl_span(t.row(state), ed.span());
}

/**
 * Effective information: the id-weighted average effect information,
 * EI = sum_i id[i] * D_KL(row_i || E_D).
 *
 * This equals the mutual information between an input distributed as id and
 * the output it induces through the TPM; with uniform id it is the classic
 * (1/n) sum_i D_KL(row_i || E_D).
 */
inline double ei(const Tpm& t, const InterventionDist& id) {
    if (id.size() != t.n()) throw LengthMismatch("intervention length != state count");
    const Dist ed = effect_distribution(t, id);
    double total = 0.0;
    for (std::size_t i = 0; i < t.n(); ++i) {
        if (id[i] == 0.0) continue;
        total += id[i] * detail::kl_span(t.row(i), ed.span());
    }
    return total;
}

inline double ei(const Tpm& t) { return ei(t, Dist::uniform(t.n())); }

/**
 * Determinism: how reliable state-to-state transitions are. The id-weighted
 * average of D_KL(row_i || uniform) normalized by log2(n); 1 exactly when
 * every supported row is a delta. Returns 0 for n = 1 by convention.
 */
inline double determinism(const Tpm& t, const InterventionDist& id) {
    if (id.size() != t.n()) throw LengthMismatch("intervention length != state count");
    const std::size_t n = t.n();
    if (n <= 1) return 0.0;
    const double logn = std::log2(static_cast<double>(n));
    const Dist u = Dist::uniform(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (id[i] == 0.0) continue;
        total += id[i] * detail::kl_span(t.row(i), u.span());
    }
    return total / logn;
}

inline double determinism(const Tpm& t) { return determinism(t, Dist::uniform(t.n())); }

/**
 * Degeneracy: how much deterministic convergence there is among effects,
 * D_KL(E_D || uniform) / log2(n). Returns 0 for n = 1 by convention.
 */
inline double degeneracy(const Tpm& t, const InterventionDist& id) {
    if (id.size() != t.n()) throw LengthMismatch("intervention length != state count");
    const std::size_t n = t.n();
    if (n <= 1) return 0.0;
    const double logn = std::log2(static_cast<double>(n));
    const Dist ed = effect_distribution(t, id);
    const Dist u = Dist::uniform(n);
    return detail::kl_span(ed.span(), u.span()) / logn;
}

inline double degeneracy(const Tpm& t) { return degeneracy(t, Dist::uniform(t.n())); }

/// Assembles EI, its decomposition, and the per-state effect information.
inline CausalReport full_report(const Tpm& t, const InterventionDist& id) {
    if (id.size() != t.n()) throw LengthMismatch("intervention length != state count");
    const std::size_t n = t.n();
    CausalReport r;
    r.size = n <= 1 ? 0.0 : std::log2(static_cast<double>(n));
    r.intervention_entropy = entropy(id);
    r.effect_info_per_state.assign(n, 0.0);
    if (n <= 1) return r;

    const Dist ed = effect_distribution(t, id);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (id[i] == 0.0) continue;
        const double d = detail::kl_span(t.row(i), ed.span());
        r.effect_info_per_state[i] = d;
        total += id[i] * d;
    }
    r.ei = total;
    r.determinism = determinism(t, id);
    r.degeneracy = degeneracy(t, id);
    r.effectiveness = r.determinism - r.degeneracy;
    return r;
}

inline CausalReport full_report(const Tpm& t) {
    return full_report(t, Dist::uniform(t.n()));
}

}  // namespace emergence
