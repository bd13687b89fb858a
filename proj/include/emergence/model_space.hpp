#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emergence/errors.hpp"
#include "emergence/measures.hpp"
#include "emergence/tpm.hpp"

namespace emergence {

/**
 * Set partition in restricted-growth form: assignment[i] is the block index
 * of item i, the first occurrence of each new block index is the smallest
 * unused one, and block indices are contiguous from 0.
 */
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> assignment) : assignment_(std::move(assignment)) {
        if (assignment_.empty()) throw InvalidPartition("empty partition");
        int max_seen = -1;
        for (std::size_t i = 0; i < assignment_.size(); ++i) {
            const int a = assignment_[i];
            if (a < 0 || a > max_seen + 1) {
                throw InvalidPartition("assignment is not a restricted-growth string at index " +
                                       std::to_string(i));
            }
            max_seen = std::max(max_seen, a);
        }
        m_ = max_seen + 1;
    }

    /// Canonicalizes arbitrary block labels into restricted-growth form.
    static Partition from_labels(std::span<const int> labels) {
        std::vector<int> canon(labels.size());
        std::vector<int> remap;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            auto it = std::find(remap.begin(), remap.end(), labels[i]);
            if (it == remap.end()) {
                remap.push_back(labels[i]);
                canon[i] = static_cast<int>(remap.size()) - 1;
            } else {
                canon[i] = static_cast<int>(it - remap.begin());
            }
        }
        return Partition(std::move(canon));
    }

    static Partition singletons(std::size_t n) {
        std::vector<int> a(n);
        std::iota(a.begin(), a.end(), 0);
        return Partition(std::move(a));
    }

    static Partition single_block(std::size_t n) {
        return Partition(std::vector<int>(n, 0));
    }

    std::size_t size() const { return assignment_.size(); }
    int m() const { return m_; }
    int block_of(std::size_t i) const { return assignment_[i]; }
    const std::vector<int>& assignment() const { return assignment_; }

    std::vector<int> block_sizes() const {
        std::vector<int> sizes(m_, 0);
        for (int a : assignment_) ++sizes[a];
        return sizes;
    }

    std::vector<std::vector<int>> blocks() const {
        std::vector<std::vector<int>> out(m_);
        for (std::size_t i = 0; i < assignment_.size(); ++i) {
            out[assignment_[i]].push_back(static_cast<int>(i));
        }
        return out;
    }

    bool operator==(const Partition& other) const { return assignment_ == other.assignment_; }

private:
    std::vector<int> assignment_;
    int m_ = 0;
};

/**
 * A macroscale model specification: which micro states the model treats as
 * endogenous, and how the endogenous states are grouped into macrostates.
 *
 * The micro (identity) model is the full endogenous set with the singleton
 * partition, so micro and macro analyses flow through one code path.
 */
struct ModelChoice {
    std::vector<int> endogenous;  // sorted ascending, no duplicates
    Partition partition;          // over `endogenous`, in index order
    std::string description;

    static ModelChoice identity(std::size_t n) {
        ModelChoice c;
        c.endogenous.resize(n);
        std::iota(c.endogenous.begin(), c.endogenous.end(), 0);
        c.partition = Partition::singletons(n);
        c.description = "micro";
        return c;
    }

    int macro_count() const { return partition.m(); }

    bool is_identity(std::size_t n) const {
        return endogenous.size() == n && partition.m() == static_cast<int>(n);
    }

    void validate(std::size_t n) const {
        if (endogenous.empty()) throw EmptyEndogenous();
        for (std::size_t k = 0; k < endogenous.size(); ++k) {
            if (endogenous[k] < 0 || endogenous[k] >= static_cast<int>(n)) {
                throw InvalidChoice("endogenous index out of range");
            }
            if (k > 0 && endogenous[k] <= endogenous[k - 1]) {
                throw InvalidChoice("endogenous indices must be strictly increasing");
            }
        }
        if (partition.size() != endogenous.size()) {
            throw InvalidChoice("partition must cover exactly the endogenous states");
        }
    }
};

namespace detail {

struct MacroScratch {
    std::vector<double> rows;  // m*m macro rows
    std::vector<double> ed;    // m effect-distribution scratch
    std::vector<int> bsizes;   // m block sizes
};

/**
 * Builds the macro rows (average of member micro rows, columns aggregated by
 * block) into scratch. Returns false when some endogenous row leaks more
 * than leak_tol into the exogenous set. Rows are renormalized only when the
 * tolerated leak exceeds the stochasticity tolerance.
 */
inline bool macro_rows(const Tpm& t, std::span<const int> endo,
                       std::span<const int> assign, int m, double leak_tol,
                       MacroScratch& s) {
    const std::size_t n = t.n();
    const std::size_t k = endo.size();
    s.rows.assign(static_cast<std::size_t>(m) * m, 0.0);
    s.ed.assign(m, 0.0);
    s.bsizes.assign(m, 0);
    for (std::size_t pos = 0; pos < k; ++pos) ++s.bsizes[assign[pos]];

    for (std::size_t pos = 0; pos < k; ++pos) {
        const double* row = t.flat().data() + static_cast<std::size_t>(endo[pos]) * n;
        double* macro_row = s.rows.data() + static_cast<std::size_t>(assign[pos]) * m;
        double kept = 0.0;
        for (std::size_t pos2 = 0; pos2 < k; ++pos2) {
            const double v = row[endo[pos2]];
            macro_row[assign[pos2]] += v;
            kept += v;
        }
        // row sums to 1, so anything not kept went to an exogenous column
        const double leaked = 1.0 - kept;
        if (leaked > leak_tol) return false;
    }
    for (int J = 0; J < m; ++J) {
        double* macro_row = s.rows.data() + static_cast<std::size_t>(J) * m;
        const double inv = 1.0 / static_cast<double>(s.bsizes[J]);
        double sum = 0.0;
        for (int K = 0; K < m; ++K) {
            macro_row[K] *= inv;
            sum += macro_row[K];
        }
        if (std::abs(sum - 1.0) > kProbTolerance) {
            for (int K = 0; K < m; ++K) macro_row[K] /= sum;
        }
    }
    return true;
}

}  // namespace detail

/**
 * The intervention distribution over the micro space induced by a model
 * choice: each macrostate gets mass 1/m, split uniformly among its micro
 * members; exogenous states get zero.
 */
inline InterventionDist warped_intervention(const ModelChoice& c, std::size_t n) {
    c.validate(n);
    const auto sizes = c.partition.block_sizes();
    const double inv_m = 1.0 / static_cast<double>(c.partition.m());
    std::vector<double> w(n, 0.0);
    for (std::size_t pos = 0; pos < c.endogenous.size(); ++pos) {
        w[c.endogenous[pos]] =
            inv_m / static_cast<double>(sizes[c.partition.block_of(pos)]);
    }
    return Dist(Dist::Unchecked{}, std::move(w));
}

/**
 * Coarse-grained TPM over the macrostates of a model choice. Macro row J is
 * the average of its member micro rows with columns summed per macrostate.
 *
 * An endogenous state that transitions into the exogenous set with
 * probability above leak_tol makes the choice invalid (MassEscapesEndogenous)
 * rather than being silently renormalized.
 */
inline Tpm macro_tpm(const Tpm& t, const ModelChoice& c,
                     double leak_tol = kProbTolerance) {
    c.validate(t.n());
    const int m = c.partition.m();
    detail::MacroScratch s;
    // report the first offending micro row, matching the scan order
    {
        const std::size_t n = t.n();
        std::vector<bool> endo_mask(n, false);
        for (int e : c.endogenous) endo_mask[e] = true;
        for (int e : c.endogenous) {
            double leaked = 0.0;
            const double* row = t.flat().data() + static_cast<std::size_t>(e) * n;
            for (std::size_t j = 0; j < n; ++j) {
                if (!endo_mask[j]) leaked += row[j];
            }
            if (leaked > leak_tol) throw MassEscapesEndogenous(e, leaked);
        }
    }
    detail::macro_rows(t, c.endogenous, c.partition.assignment(), m, leak_tol, s);

    std::vector<std::string> labels;
    if (!t.labels().empty()) {
        const auto blocks = c.partition.blocks();
        for (const auto& block : blocks) {
            std::string lab;
            for (std::size_t k = 0; k < block.size(); ++k) {
                if (k > 0) lab += '+';
                lab += t.labels()[c.endogenous[block[k]]];
            }
            labels.push_back(std::move(lab));
        }
    }
    return Tpm(Tpm::Unchecked{}, m, std::move(s.rows), std::move(labels));
}

/// Full causal report of the macro model: the macro TPM under a uniform
/// intervention over its m macrostates.
inline CausalReport macro_ei(const Tpm& t, const ModelChoice& c,
                             double leak_tol = kProbTolerance) {
    const Tpm mt = macro_tpm(t, c, leak_tol);
    return full_report(mt);
}

/**
 * Second route to the macro EI: build the joint distribution of (macro
 * intervention, macro effect) from the warped micro intervention pushed
 * through the micro TPM, and take its mutual information. Agrees with
 * macro_ei(t, c).ei within 1e-9 at the default leak tolerance.
 */
inline double macro_ei_via_warping(const Tpm& t, const ModelChoice& c,
                                   double leak_tol = kProbTolerance) {
    c.validate(t.n());
    const InterventionDist id = warped_intervention(c, t.n());
    const std::size_t n = t.n();
    const int m = c.partition.m();

    std::vector<int> block_of_micro(n, -1);
    for (std::size_t pos = 0; pos < c.endogenous.size(); ++pos) {
        block_of_micro[c.endogenous[pos]] = c.partition.block_of(pos);
    }

    std::vector<double> joint(static_cast<std::size_t>(m) * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (id[i] == 0.0) continue;
        const int J = block_of_micro[i];
        double leaked = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const int K = block_of_micro[j];
            if (K < 0) {
                leaked += t(i, j);
            } else {
                joint[static_cast<std::size_t>(J) * m + K] += id[i] * t(i, j);
            }
        }
        if (leaked > leak_tol) throw MassEscapesEndogenous(i, leaked);
    }

    std::vector<double> p_in(m, 0.0), p_out(m, 0.0);
    for (int J = 0; J < m; ++J) {
        for (int K = 0; K < m; ++K) {
            p_in[J] += joint[static_cast<std::size_t>(J) * m + K];
            p_out[K] += joint[static_cast<std::size_t>(J) * m + K];
        }
    }
    double mi = 0.0;
    for (int J = 0; J < m; ++J) {
        for (int K = 0; K < m; ++K) {
            const double pj = joint[static_cast<std::size_t>(J) * m + K];
            if (pj > 0.0) mi += pj * std::log2(pj / (p_in[J] * p_out[K]));
        }
    }
    return mi;
}

/**
 * The generalized emergence family: n-1 states transitioning uniformly among
 * themselves plus one absorbing state, with the 2-macrostate grouping that
 * has EI exactly 1 bit for every n.
 */
struct GeneralizedCase {
    Tpm tpm;
    ModelChoice choice;
};

inline GeneralizedCase generalized_case(std::size_t n) {
    if (n < 3) throw InvalidArgument("generalized case needs n >= 3");
    std::vector<double> flat(n * n, 0.0);
    const double p = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) flat[i * n + j] = p;
    }
    flat[n * n - 1] = 1.0;

    ModelChoice c;
    c.endogenous.resize(n);
    std::iota(c.endogenous.begin(), c.endogenous.end(), 0);
    std::vector<int> assign(n, 0);
    assign[n - 1] = 1;
    c.partition = Partition(std::move(assign));
    c.description = "transient states vs absorbing state";
    return {Tpm(Tpm::Unchecked{}, n, std::move(flat)), std::move(c)};
}

}  // namespace emergence
