#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "emergence/capacity.hpp"
#include "emergence/errors.hpp"
#include "emergence/gate_network.hpp"
#include "emergence/measures.hpp"
#include "emergence/model_space.hpp"
#include "emergence/rng.hpp"
#include "emergence/tpm.hpp"

namespace emergence {

/// Documented default seed; every randomized operation is reproducible.
inline constexpr std::uint64_t kDefaultSeed = 1729;

/// Partition streams refuse state counts above this by default (Bell numbers
/// explode; B(13) is already 27.6 million).
inline constexpr int kMaxEnumerationStates = 13;

/// Bell number B(n) by the Bell-triangle recurrence.
inline std::uint64_t bell_number(int n) {
    if (n < 0 || n > 25) throw InvalidArgument("bell_number supports 0 <= n <= 25");
    if (n == 0) return 1;
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i < n; ++i) {
        std::vector<std::uint64_t> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (std::uint64_t x : row) next.push_back(next.back() + x);
        row = std::move(next);
    }
    return row.back();
}

/**
 * Streams every set partition of n items as restricted-growth strings in
 * lexicographic order; the stream length is B(n).
 */
class PartitionStream {
public:
    explicit PartitionStream(int n, int max_states = kMaxEnumerationStates)
        : n_(n) {
        if (n < 1) throw InvalidArgument("partition stream needs n >= 1");
        if (n > max_states) throw RefusedAboveThreshold(n <= 25 ? bell_number(n)
                                                                : UINT64_MAX);
        a_.assign(n, 0);
        b_.assign(n, 1);
        done_ = false;
    }

    bool valid() const { return !done_; }
    const std::vector<int>& assignment() const { return a_; }
    int block_count() const { return 1 + *std::max_element(a_.begin(), a_.end()); }

    void advance() {
        for (int i = n_ - 1; i > 0; --i) {
            if (a_[i] < b_[i]) {
                ++a_[i];
                for (int j = i + 1; j < n_; ++j) {
                    a_[j] = 0;
                    b_[j] = std::max(b_[j - 1], a_[j - 1] + 1);
                }
                return;
            }
        }
        done_ = true;
    }

private:
    int n_;
    std::vector<int> a_;  // current restricted-growth string
    std::vector<int> b_;  // b[i] = 1 + max(a[0..i-1])
    bool done_ = true;
};

/// Calls fn(assignment) for every partition of n items.
template <typename Fn>
void for_each_partition(int n, Fn&& fn, int max_states = kMaxEnumerationStates) {
    for (PartitionStream ps(n, max_states); ps.valid(); ps.advance()) {
        fn(ps.assignment());
    }
}

/**
 * Rungs of the model-choice ladder: each level's choice space contains the
 * previous one's, so EI^max is nondecreasing in the level.
 */
enum class LadderLevel : int {
    Micro = 0,        // the identity model only
    CoarseGrain = 1,  // every partition of the full state set
    Restriction = 2,  // adds endogenous-subset restriction (cross product)
    Elements = 3,     // adds freezing and black-boxing; gate networks only
};

inline LadderLevel ladder_level_from_int(int level) {
    if (level < 0 || level > 3) throw InvalidArgument("ladder level must be 0..3");
    return static_cast<LadderLevel>(level);
}

struct SearchOptions {
    std::uint64_t budget = 10'000'000;  // maximum number of choices to evaluate
    double leak_tol = kProbTolerance;
    int threads = 1;
};

struct SearchResult {
    ModelChoice best_choice;
    std::optional<ElementChoice> best_element_choice;  // set when level 3 wins here
    double best_ei = 0.0;
    std::uint64_t evaluated = 0;
    std::uint64_t skipped_leaky = 0;
    std::string method;
    InterventionDist warped_id;  // over the micro space
};

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

inline std::uint64_t binomial(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) {
        r = saturating_mul(r, static_cast<std::uint64_t>(n - i));
        r /= static_cast<std::uint64_t>(i + 1);
    }
    return r;
}

/// Number of choices a level enumerates for an n-state system.
inline std::uint64_t level_choice_count(std::size_t n, LadderLevel level) {
    switch (level) {
        case LadderLevel::Micro:
            return 1;
        case LadderLevel::CoarseGrain:
            return n <= 25 ? bell_number(static_cast<int>(n)) : UINT64_MAX;
        default: {
            std::uint64_t total = 0;
            for (int k = 1; k <= static_cast<int>(n); ++k) {
                const std::uint64_t bk = k <= 25 ? bell_number(k) : UINT64_MAX;
                total = saturating_add(
                    total, saturating_mul(binomial(static_cast<int>(n), k), bk));
            }
            return total;
        }
    }
}

/// Number of element-level choices (role assignment times state groupings).
inline std::uint64_t element_choice_count(std::size_t n_elements) {
    std::uint64_t total = 0;
    for (int k = 1; k <= static_cast<int>(n_elements); ++k) {
        std::uint64_t roles = binomial(static_cast<int>(n_elements), k);
        for (int j = 0; j < static_cast<int>(n_elements) - k; ++j) {
            roles = saturating_mul(roles, 3);
        }
        const int states = 1 << k;
        const std::uint64_t bs = states <= 25 ? bell_number(states) : UINT64_MAX;
        total = saturating_add(total, saturating_mul(roles, bs));
    }
    return total;
}

/// Running best over (ei, choice) with the deterministic tie-break order:
/// larger ei, then fewer macrostates, then lexicographically smaller
/// restricted-growth string, then smaller endogenous index sequence.
struct BestChoice {
    bool have = false;
    double ei = -1.0;
    int m = 0;
    std::vector<int> assign;
    std::vector<int> endo;

    bool would_replace(double cand_ei, int cand_m, std::span<const int> cand_assign,
                       std::span<const int> cand_endo) const {
        if (!have) return true;
        if (cand_ei != ei) return cand_ei > ei;
        if (cand_m != m) return cand_m < m;
        const auto lex = [](std::span<const int> x, std::span<const int> y) {
            return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end())
                       ? -1
                       : (std::equal(x.begin(), x.end(), y.begin(), y.end()) ? 0 : 1);
        };
        const int c = lex(cand_assign, {assign.data(), assign.size()});
        if (c != 0) return c < 0;
        return lex(cand_endo, {endo.data(), endo.size()}) < 0;
    }

    void replace(double cand_ei, int cand_m, std::span<const int> cand_assign,
                 std::span<const int> cand_endo) {
        have = true;
        ei = cand_ei;
        m = cand_m;
        assign.assign(cand_assign.begin(), cand_assign.end());
        endo.assign(cand_endo.begin(), cand_endo.end());
    }

    void merge(const BestChoice& other) {
        if (other.have && would_replace(other.ei, other.m,
                                        {other.assign.data(), other.assign.size()},
                                        {other.endo.data(), other.endo.size()})) {
            *this = other;
        }
    }
};

/// One buffered batch of candidate choices, evaluated across threads with a
/// deterministic merge.
struct ChoiceBatch {
    std::size_t n = 0;               // micro state count (stride of assign rows)
    std::vector<std::uint32_t> masks;
    std::vector<std::int8_t> assigns;  // stride n, only first popcount(mask) used

    void clear() {
        masks.clear();
        assigns.clear();
    }
    std::size_t size() const { return masks.size(); }

    void push(std::uint32_t mask, std::span<const int> assign) {
        masks.push_back(mask);
        const std::size_t at = assigns.size();
        assigns.resize(at + n, 0);
        for (std::size_t i = 0; i < assign.size(); ++i) {
            assigns[at + i] = static_cast<std::int8_t>(assign[i]);
        }
    }
};

struct BatchStats {
    std::uint64_t evaluated = 0;
    std::uint64_t skipped_leaky = 0;
};

inline void eval_batch_range(const Tpm& t, const ChoiceBatch& batch, std::size_t lo,
                             std::size_t hi, double leak_tol, BestChoice& best,
                             BatchStats& stats) {
    const std::size_t n = t.n();
    MacroScratch scratch;
    std::vector<int> endo;
    std::vector<int> assign;
    endo.reserve(n);
    assign.reserve(n);
    for (std::size_t idx = lo; idx < hi; ++idx) {
        const std::uint32_t mask = batch.masks[idx];
        endo.clear();
        for (std::size_t s = 0; s < n; ++s) {
            if (mask & (1u << s)) endo.push_back(static_cast<int>(s));
        }
        assign.clear();
        int m = 0;
        for (std::size_t k = 0; k < endo.size(); ++k) {
            const int a = batch.assigns[idx * n + k];
            assign.push_back(a);
            m = std::max(m, a + 1);
        }
        if (!macro_rows(t, endo, assign, m, leak_tol, scratch)) {
            ++stats.skipped_leaky;
            continue;
        }
        ++stats.evaluated;
        const double v = ei_uniform_from_rows(
            m, {scratch.rows.data(), scratch.rows.size()}, {scratch.ed.data(),
                                                            scratch.ed.size()});
        if (best.would_replace(v, m, assign, endo)) best.replace(v, m, assign, endo);
    }
}

inline void eval_batch(const Tpm& t, const ChoiceBatch& batch, double leak_tol,
                       int threads, BestChoice& best, BatchStats& stats) {
    const std::size_t total = batch.size();
    if (threads <= 1 || total < 2048) {
        eval_batch_range(t, batch, 0, total, leak_tol, best, stats);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(threads, total);
    std::vector<BestChoice> bests(nthreads);
    std::vector<BatchStats> all_stats(nthreads);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t ti = 0; ti < nthreads; ++ti) {
        const std::size_t lo = total * ti / nthreads;
        const std::size_t hi = total * (ti + 1) / nthreads;
        pool.emplace_back([&, ti, lo, hi] {
            eval_batch_range(t, batch, lo, hi, leak_tol, bests[ti], all_stats[ti]);
        });
    }
    for (auto& th : pool) th.join();
    for (std::size_t ti = 0; ti < nthreads; ++ti) {
        best.merge(bests[ti]);
        stats.evaluated += all_stats[ti].evaluated;
        stats.skipped_leaky += all_stats[ti].skipped_leaky;
    }
}

}  // namespace detail

/**
 * Evaluates every model choice at the given ladder level and returns the EI
 * maximizer. Choices whose endogenous dynamics leak into the exogenous set
 * are skipped and counted. Ties are broken deterministically (fewest
 * macrostates, smallest restricted-growth string, smallest endogenous set),
 * and the result is identical for every thread count.
 */
inline SearchResult exhaustive_search(const Tpm& t, LadderLevel level,
                                      const SearchOptions& opts = {}) {
    if (level == LadderLevel::Elements) {
        throw InvalidArgument("level 3 applies to gate networks; search the network instead");
    }
    const std::size_t n = t.n();
    if (n > 25) throw RefusedAboveThreshold(UINT64_MAX);
    const std::uint64_t count = detail::level_choice_count(n, level);
    if (count > opts.budget) throw RefusedAboveThreshold(count);

    detail::BestChoice best;
    detail::BatchStats stats;
    detail::ChoiceBatch batch;
    batch.n = n;
    constexpr std::size_t kBatchSize = 1 << 14;

    auto flush = [&] {
        detail::eval_batch(t, batch, opts.leak_tol, opts.threads, best, stats);
        batch.clear();
    };
    auto offer = [&](std::uint32_t mask, std::span<const int> assign) {
        batch.push(mask, assign);
        if (batch.size() >= kBatchSize) flush();
    };

    const std::uint32_t full_mask =
        n == 32 ? 0xffffffffu : ((1u << n) - 1u);
    switch (level) {
        case LadderLevel::Micro: {
            const auto ident = Partition::singletons(n).assignment();
            offer(full_mask, ident);
            break;
        }
        case LadderLevel::CoarseGrain: {
            for_each_partition(static_cast<int>(n),
                               [&](const std::vector<int>& a) { offer(full_mask, a); },
                               25);
            break;
        }
        default: {
            for (std::uint32_t mask = 1; mask <= full_mask; ++mask) {
                const int k = std::popcount(mask);
                for_each_partition(k,
                                   [&](const std::vector<int>& a) { offer(mask, a); },
                                   25);
            }
            break;
        }
    }
    flush();

    SearchResult r;
    r.best_ei = best.ei;
    r.evaluated = stats.evaluated;
    r.skipped_leaky = stats.skipped_leaky;
    r.method = "exhaustive";
    r.best_choice.endogenous = best.endo;
    r.best_choice.partition = Partition(best.assign);
    r.best_choice.description = "search level " + std::to_string(static_cast<int>(level));
    r.warped_id = warped_intervention(r.best_choice, n);
    return r;
}

struct AnnealSchedule {
    double t0 = 0.5;
    double cooling = 0.9995;
    int steps = 20000;
    int chains = 4;
};

namespace detail {

struct AnnealState {
    std::vector<int> endo;    // sorted micro indices
    std::vector<int> assign;  // restricted-growth over endo
};

inline void canonicalize(AnnealState& s) {
    s.assign = Partition::from_labels(s.assign).assignment();
}

/// Proposes one neighbor move in place; returns false when the move is a
/// no-op. Kinds: 0 merge, 1 split, 2 move one state, 3 toggle endogenous.
inline bool propose_move(AnnealState& s, std::size_t n, bool allow_toggle, Rng& rng) {
    const int kinds = allow_toggle ? 4 : 3;
    const int kind = static_cast<int>(rng.next_below(kinds));
    const std::size_t k = s.endo.size();
    const int m = 1 + *std::max_element(s.assign.begin(), s.assign.end());
    switch (kind) {
        case 0: {  // merge two blocks
            if (m < 2) return false;
            const int a = static_cast<int>(rng.next_below(m));
            int b = static_cast<int>(rng.next_below(m - 1));
            if (b >= a) ++b;
            for (auto& x : s.assign) {
                if (x == b) x = a;
            }
            canonicalize(s);
            return true;
        }
        case 1: {  // split a block by per-member coins
            std::vector<int> members;
            const int target = static_cast<int>(rng.next_below(m));
            for (std::size_t i = 0; i < k; ++i) {
                if (s.assign[i] == target) members.push_back(static_cast<int>(i));
            }
            if (members.size() < 2) return false;
            std::vector<int> moved;
            for (int i : members) {
                if (rng.next_bool(0.5)) moved.push_back(i);
            }
            if (moved.empty() || moved.size() == members.size()) {
                moved.assign(1, members[rng.next_below(members.size())]);
            }
            for (int i : moved) s.assign[i] = m;
            canonicalize(s);
            return true;
        }
        case 2: {  // move one state to another (possibly new) block
            if (k < 2) return false;
            const std::size_t pos = rng.next_below(k);
            int target = static_cast<int>(rng.next_below(m + 1));
            if (target == s.assign[pos]) return false;
            s.assign[pos] = target;
            canonicalize(s);
            return true;
        }
        default: {  // toggle endogenous membership of a micro state
            const std::size_t state = rng.next_below(n);
            const auto it = std::lower_bound(s.endo.begin(), s.endo.end(),
                                             static_cast<int>(state));
            if (it != s.endo.end() && *it == static_cast<int>(state)) {
                if (k < 2) return false;
                const std::size_t pos = static_cast<std::size_t>(it - s.endo.begin());
                s.endo.erase(it);
                s.assign.erase(s.assign.begin() + static_cast<long>(pos));
            } else {
                const std::size_t pos = static_cast<std::size_t>(it - s.endo.begin());
                s.endo.insert(it, static_cast<int>(state));
                s.assign.insert(s.assign.begin() + static_cast<long>(pos),
                                static_cast<int>(rng.next_below(m + 1)));
            }
            canonicalize(s);
            return true;
        }
    }
}

struct ChainResult {
    BestChoice best;
    std::uint64_t evaluated = 0;
    std::uint64_t skipped_leaky = 0;
};

inline ChainResult run_chain(const Tpm& t, LadderLevel level, std::uint64_t chain_seed,
                             const AnnealSchedule& sched, double leak_tol) {
    const std::size_t n = t.n();
    Rng rng(chain_seed);
    MacroScratch scratch;
    ChainResult out;

    AnnealState cur;
    cur.endo.resize(n);
    std::iota(cur.endo.begin(), cur.endo.end(), 0);
    cur.assign = Partition::singletons(n).assignment();

    auto evaluate = [&](const AnnealState& s) -> std::optional<double> {
        const int m = 1 + *std::max_element(s.assign.begin(), s.assign.end());
        if (!macro_rows(t, s.endo, s.assign, m, leak_tol, scratch)) {
            ++out.skipped_leaky;
            return std::nullopt;
        }
        ++out.evaluated;
        return ei_uniform_from_rows(m, {scratch.rows.data(), scratch.rows.size()},
                                    {scratch.ed.data(), scratch.ed.size()});
    };

    double cur_ei = *evaluate(cur);
    out.best.replace(cur_ei, static_cast<int>(n), cur.assign, cur.endo);
    if (level == LadderLevel::Micro) return out;

    const bool allow_toggle = level >= LadderLevel::Restriction;
    double temp = sched.t0;
    for (int step = 0; step < sched.steps; ++step, temp *= sched.cooling) {
        AnnealState cand = cur;
        if (!propose_move(cand, n, allow_toggle, rng)) continue;
        const auto cand_ei = evaluate(cand);
        if (!cand_ei) continue;
        const double delta = *cand_ei - cur_ei;
        if (delta >= 0.0 || rng.next_unit() < std::exp(delta / std::max(temp, 1e-12))) {
            cur = std::move(cand);
            cur_ei = *cand_ei;
            const int m = 1 + *std::max_element(cur.assign.begin(), cur.assign.end());
            if (out.best.would_replace(cur_ei, m, cur.assign, cur.endo)) {
                out.best.replace(cur_ei, m, cur.assign, cur.endo);
            }
        }
    }
    return out;
}

}  // namespace detail

/**
 * Simulated annealing over the choice space, for systems beyond the
 * exhaustive budget. Runs independent seeded chains (in parallel when
 * opts.threads > 1) and reduces with the same deterministic tie-break as
 * the exhaustive search, so results are bit-reproducible for a fixed seed
 * regardless of thread count.
 */
inline SearchResult anneal_search(const Tpm& t, LadderLevel level, std::uint64_t seed,
                                  const AnnealSchedule& sched = {},
                                  const SearchOptions& opts = {}) {
    if (level == LadderLevel::Elements) {
        throw InvalidArgument("level 3 applies to gate networks; search the network instead");
    }
    if (sched.steps < 1 || sched.chains < 1 || sched.t0 <= 0.0 || sched.cooling <= 0.0 ||
        sched.cooling > 1.0) {
        throw InvalidArgument("invalid annealing schedule");
    }
    const std::size_t n = t.n();
    std::vector<detail::ChainResult> results(sched.chains);
    auto run = [&](int c) {
        results[c] = detail::run_chain(t, level, derive_seed(seed, c), sched,
                                       opts.leak_tol);
    };
    if (opts.threads > 1) {
        std::vector<std::thread> pool;
        for (int c = 0; c < sched.chains; ++c) pool.emplace_back(run, c);
        for (auto& th : pool) th.join();
    } else {
        for (int c = 0; c < sched.chains; ++c) run(c);
    }

    detail::BestChoice best;
    SearchResult r;
    for (const auto& cr : results) {
        best.merge(cr.best);
        r.evaluated += cr.evaluated;
        r.skipped_leaky += cr.skipped_leaky;
    }
    r.best_ei = best.ei;
    r.method = "annealing";
    r.best_choice.endogenous = best.endo;
    r.best_choice.partition = Partition(best.assign);
    r.best_choice.description = "anneal level " + std::to_string(static_cast<int>(level));
    r.warped_id = warped_intervention(r.best_choice, n);
    return r;
}

/// Deterministic preference order over element choices, mirroring the state
/// space tie-break.
inline bool element_choice_preferred(const ElementChoice& a, const ElementChoice& b) {
    if (a.grouping.m() != b.grouping.m()) return a.grouping.m() < b.grouping.m();
    if (a.endogenous != b.endogenous) return a.endogenous < b.endogenous;
    if (a.frozen != b.frozen) return a.frozen < b.frozen;
    if (a.blackboxed != b.blackboxed) return a.blackboxed < b.blackboxed;
    return a.grouping.assignment() < b.grouping.assignment();
}

/**
 * Exhaustive search over element-level model choices of a gate network:
 * every assignment of elements to endogenous / frozen-0 / frozen-1 /
 * black-boxed (at least one endogenous), crossed with every grouping of the
 * endogenous joint states.
 */
inline SearchResult exhaustive_element_search(const GateNetwork& g,
                                              const SearchOptions& opts = {}) {
    const std::size_t nel = g.size();
    const std::uint64_t count = detail::element_choice_count(nel);
    if (count > opts.budget) throw RefusedAboveThreshold(count);

    SearchResult r;
    r.method = "exhaustive";
    bool have = false;
    double best_ei = -1.0;
    ElementChoice best;
    InterventionDist best_warped;

    std::vector<int> roles(nel, 0);  // 0 endo, 1 frozen0, 2 frozen1, 3 blackboxed
    const std::uint64_t assignments = [&] {
        std::uint64_t a = 1;
        for (std::size_t i = 0; i < nel; ++i) a = detail::saturating_mul(a, 4);
        return a;
    }();
    for (std::uint64_t code = 0; code < assignments; ++code) {
        std::uint64_t c = code;
        ElementChoice ec;
        for (std::size_t e = 0; e < nel; ++e, c /= 4) {
            switch (c % 4) {
                case 0: ec.endogenous.push_back(static_cast<int>(e)); break;
                case 1: ec.frozen[static_cast<int>(e)] = 0; break;
                case 2: ec.frozen[static_cast<int>(e)] = 1; break;
                default: ec.blackboxed.push_back(static_cast<int>(e)); break;
            }
        }
        if (ec.endogenous.empty()) continue;
        const int states = 1 << ec.endogenous.size();
        for (PartitionStream ps(states, 25); ps.valid(); ps.advance()) {
            ec.grouping = Partition(ps.assignment());
            const ElementModel model = apply_element_choice(g, ec);
            ++r.evaluated;
            const double v = ei(model.macro);
            if (!have || v > best_ei ||
                (v == best_ei && element_choice_preferred(ec, best))) {
                have = true;
                best_ei = v;
                best = ec;
                best_warped = model.micro_warped;
            }
        }
    }

    r.best_ei = best_ei;
    r.best_element_choice = best;
    r.warped_id = best_warped;
    // the state-space view of the winning element choice is not represented;
    // best_choice stays the identity over the compiled state space
    r.best_choice = ModelChoice::identity(std::size_t{1} << nel);
    return r;
}

struct LadderRow {
    int level = 0;
    double ei_max = 0.0;
    InterventionDist warped_id;
    double emd_to_capacity_input = 0.0;
    std::uint64_t choices_evaluated = 0;
    std::optional<ModelChoice> best_choice;          // absent when an element choice won
    std::optional<ElementChoice> best_element_choice;
};

struct LadderReport {
    std::vector<LadderRow> rows;
    double capacity = 0.0;
    Dist capacity_input;
};

/**
 * Per-level EI^max together with how far each level's warped intervention
 * distribution sits from the capacity-achieving input (earth mover's
 * distance in micro space). Levels beyond the exhaustive budget fall back
 * to seeded annealing.
 */
inline LadderReport ladder_report(const Tpm& t, int max_level,
                                  const SearchOptions& opts = {},
                                  std::uint64_t seed = kDefaultSeed,
                                  const AnnealSchedule& sched = {}) {
    if (max_level < 0 || max_level > 2) {
        throw InvalidArgument("ladder levels for a plain TPM are 0..2");
    }
    LadderReport report;
    const CapacityResult cap = blahut_arimoto(t);
    report.capacity = cap.capacity;
    report.capacity_input = cap.optimal_input;
    for (int lv = 0; lv <= max_level; ++lv) {
        const LadderLevel level = ladder_level_from_int(lv);
        SearchResult s;
        if (detail::level_choice_count(t.n(), level) <= opts.budget) {
            s = exhaustive_search(t, level, opts);
        } else {
            s = anneal_search(t, level, derive_seed(seed, 0x1ad + lv), sched, opts);
        }
        LadderRow row;
        row.level = lv;
        row.ei_max = s.best_ei;
        row.warped_id = s.warped_id;
        row.emd_to_capacity_input = emd(s.warped_id, cap.optimal_input);
        row.choices_evaluated = s.evaluated;
        row.best_choice = s.best_choice;
        report.rows.push_back(std::move(row));
    }
    return report;
}

/// Ladder for a gate network: levels 0-2 over the compiled state space,
/// level 3 adds the element-choice space (freezing and black-boxing).
inline LadderReport ladder_report(const GateNetwork& g, int max_level,
                                  const SearchOptions& opts = {},
                                  std::uint64_t seed = kDefaultSeed,
                                  const AnnealSchedule& sched = {}) {
    if (max_level < 0 || max_level > 3) {
        throw InvalidArgument("ladder levels for a network are 0..3");
    }
    const Tpm t = compile_tpm(g);
    LadderReport report = ladder_report(t, std::min(max_level, 2), opts, seed, sched);
    if (max_level == 3) {
        const SearchResult elem = exhaustive_element_search(g, opts);
        LadderRow row = report.rows.back();
        row.level = 3;
        row.choices_evaluated += elem.evaluated;
        if (elem.best_ei > row.ei_max) {
            row.ei_max = elem.best_ei;
            row.warped_id = elem.warped_id;
            row.emd_to_capacity_input = emd(elem.warped_id, report.capacity_input);
            row.best_choice.reset();
            row.best_element_choice = elem.best_element_choice;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace emergence
