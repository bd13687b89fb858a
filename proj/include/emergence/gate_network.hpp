#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emergence/errors.hpp"
#include "emergence/model_space.hpp"
#include "emergence/tpm.hpp"

namespace emergence {

/// Update rule as a truth table over the joint state of the element's
/// inputs: table[k] = P(element is 1 at t+1 | inputs in joint state k).
/// Input joint states are little-endian over the input list. Deterministic
/// rules have 0/1 entries; noisy rules any probability.
struct GateRule {
    std::vector<double> table;
};

inline GateRule and_rule(std::size_t fan_in) {
    GateRule r;
    r.table.assign(std::size_t{1} << fan_in, 0.0);
    r.table.back() = 1.0;
    return r;
}

inline GateRule or_rule(std::size_t fan_in) {
    GateRule r;
    r.table.assign(std::size_t{1} << fan_in, 1.0);
    r.table.front() = 0.0;
    return r;
}

inline GateRule xor_rule(std::size_t fan_in) {
    GateRule r;
    r.table.resize(std::size_t{1} << fan_in);
    for (std::size_t k = 0; k < r.table.size(); ++k) {
        r.table[k] = static_cast<double>(__builtin_popcountll(k) & 1);
    }
    return r;
}

inline GateRule copy_rule() { return GateRule{{0.0, 1.0}}; }

struct GateElement {
    std::string name;
    GateRule rule;
    std::vector<int> inputs;
};

/// Cap on element count: the compiled state space is 2^N.
inline constexpr std::size_t kMaxElements = 20;

/**
 * Boolean network with synchronous update. Element e's next value is drawn
 * from its rule applied to the current values of its input elements.
 */
class GateNetwork {
public:
    GateNetwork() = default;

    explicit GateNetwork(std::vector<GateElement> elements)
        : elements_(std::move(elements)) {
        const std::size_t n = elements_.size();
        if (n == 0) throw InvalidArgument("a network needs at least one element");
        for (std::size_t e = 0; e < n; ++e) {
            const auto& el = elements_[e];
            for (int in : el.inputs) {
                if (in < 0 || in >= static_cast<int>(n)) {
                    throw InvalidArgument("element " + el.name + " has an input out of range");
                }
            }
            if (el.rule.table.size() != (std::size_t{1} << el.inputs.size())) {
                throw FanInStateMissing("element " + el.name + " has a truth table of " +
                                        std::to_string(el.rule.table.size()) +
                                        " entries for fan-in " +
                                        std::to_string(el.inputs.size()));
            }
            for (double p : el.rule.table) {
                if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                    throw InvalidArgument("element " + el.name +
                                          " has a rule probability outside [0,1]");
                }
            }
        }
    }

    std::size_t size() const { return elements_.size(); }
    const std::vector<GateElement>& elements() const { return elements_; }
    const GateElement& element(std::size_t e) const { return elements_[e]; }

private:
    std::vector<GateElement> elements_;
};

/// Network in which every element is an AND gate of the given input pair.
inline GateNetwork and_network(const std::vector<std::pair<int, int>>& wiring) {
    std::vector<GateElement> els;
    els.reserve(wiring.size());
    for (std::size_t e = 0; e < wiring.size(); ++e) {
        GateElement el;
        el.name = wiring.size() <= 26 ? std::string(1, static_cast<char>('A' + e))
                                      : "E" + std::to_string(e);
        el.rule = and_rule(2);
        el.inputs = {wiring[e].first, wiring[e].second};
        els.push_back(std::move(el));
    }
    return GateNetwork(std::move(els));
}

namespace detail {

/// Joint input state of an element given the full micro state, little-endian
/// over the element's input list.
inline std::size_t input_state(const GateElement& el, std::size_t micro_state) {
    std::size_t k = 0;
    for (std::size_t bit = 0; bit < el.inputs.size(); ++bit) {
        k |= ((micro_state >> el.inputs[bit]) & 1u) << bit;
    }
    return k;
}

/// Expands per-element on-probabilities into a distribution over the joint
/// next state of the listed elements (little-endian over the list order).
inline void expand_joint(std::span<const double> p_on, std::vector<double>& out) {
    const std::size_t k = p_on.size();
    out.assign(std::size_t{1} << k, 0.0);
    out[0] = 1.0;
    std::size_t len = 1;
    for (std::size_t e = 0; e < k; ++e) {
        const double p1 = p_on[e];
        const double p0 = 1.0 - p1;
        for (std::size_t x = 0; x < len; ++x) {
            out[x + len] = out[x] * p1;
            out[x] *= p0;
        }
        len <<= 1;
    }
}

}  // namespace detail

/**
 * Compiles the network to its 2^N x 2^N TPM under synchronous update.
 * State index bit e holds element e's value (little-endian element order;
 * this encoding is part of the file-format contract).
 */
inline Tpm compile_tpm(const GateNetwork& g) {
    const std::size_t nel = g.size();
    if (nel > kMaxElements) {
        throw TooManyElements("network has " + std::to_string(nel) +
                              " elements; the state cap is 2^" +
                              std::to_string(kMaxElements));
    }
    const std::size_t n = std::size_t{1} << nel;
    std::vector<double> flat(n * n);
    std::vector<double> p_on(nel);
    std::vector<double> row;
    std::vector<std::string> labels(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t e = 0; e < nel; ++e) {
            p_on[e] = g.element(e).rule.table[detail::input_state(g.element(e), s)];
        }
        detail::expand_joint(p_on, row);
        std::copy(row.begin(), row.end(), flat.begin() + static_cast<long>(s * n));
        std::string lab(nel, '0');
        for (std::size_t e = 0; e < nel; ++e) {
            if ((s >> e) & 1u) lab[e] = '1';
        }
        labels[s] = std::move(lab);
    }
    return Tpm(Tpm::Unchecked{}, n, std::move(flat), std::move(labels));
}

/**
 * Element-level model choice: every element is endogenous, frozen to a fixed
 * value, or black-boxed; the endogenous elements' joint states are grouped
 * into macrostates by a partition.
 */
struct ElementChoice {
    std::vector<int> endogenous;   // sorted ascending
    std::map<int, int> frozen;     // element -> clamped value (0 or 1)
    std::vector<int> blackboxed;   // sorted ascending
    Partition grouping;            // over the 2^|endogenous| joint states
    std::string description;

    static ElementChoice identity(const GateNetwork& g) {
        ElementChoice c;
        c.endogenous.resize(g.size());
        std::iota(c.endogenous.begin(), c.endogenous.end(), 0);
        c.grouping = Partition::singletons(std::size_t{1} << g.size());
        c.description = "micro";
        return c;
    }

    void validate(std::size_t n_elements) const {
        if (endogenous.empty()) throw EmptyEndogenous();
        std::vector<int> seen(n_elements, 0);
        auto mark = [&](int e, const char* role) {
            if (e < 0 || e >= static_cast<int>(n_elements)) {
                throw InvalidChoice(std::string(role) + " element index out of range");
            }
            if (seen[e]++) throw InvalidChoice("element assigned to more than one role");
        };
        for (int e : endogenous) mark(e, "endogenous");
        for (const auto& [e, v] : frozen) {
            mark(e, "frozen");
            if (v != 0 && v != 1) throw InvalidChoice("frozen value must be 0 or 1");
        }
        for (int e : blackboxed) mark(e, "black-boxed");
        for (std::size_t e = 0; e < n_elements; ++e) {
            if (!seen[e]) throw InvalidChoice("element " + std::to_string(e) + " unassigned");
        }
        if (grouping.size() != (std::size_t{1} << endogenous.size())) {
            throw InvalidChoice("grouping must partition the endogenous joint states");
        }
    }
};

/// Expands a partition of the endogenous *elements* into the induced
/// partition of their joint states: states are equivalent when every element
/// group holds the same number of ones (group values are order-invariant).
inline Partition state_partition_from_element_grouping(const Partition& element_grouping,
                                                       std::size_t n_endogenous) {
    if (element_grouping.size() != n_endogenous) {
        throw InvalidPartition("element grouping size mismatch");
    }
    const auto sizes = element_grouping.block_sizes();
    const int m = element_grouping.m();
    std::vector<int> labels(std::size_t{1} << n_endogenous);
    for (std::size_t a = 0; a < labels.size(); ++a) {
        int sig = 0;
        int stride = 1;
        for (int b = 0; b < m; ++b) {
            int count = 0;
            for (std::size_t k = 0; k < n_endogenous; ++k) {
                if (element_grouping.block_of(k) == b && ((a >> k) & 1u)) ++count;
            }
            sig += count * stride;
            stride *= sizes[b] + 1;
        }
        labels[a] = sig;
    }
    return Partition::from_labels(labels);
}

struct ElementModel {
    Tpm macro;                     // TPM over the grouped endogenous macrostates
    InterventionDist micro_warped; // induced intervention over all 2^N micro states
};

/**
 * Applies an element-level model choice. Frozen elements are clamped to
 * their value at every step (as rule inputs and in the state encoding);
 * black-boxed elements are driven uniformly at random at intervention time
 * and marginalized out of the effect distribution; the endogenous joint
 * states are then grouped by the partition.
 */
inline ElementModel apply_element_choice(const GateNetwork& g, const ElementChoice& c) {
    const std::size_t nel = g.size();
    if (nel > kMaxElements) throw TooManyElements("network too large");
    c.validate(nel);

    const std::size_t ne = c.endogenous.size();
    const std::size_t nb = c.blackboxed.size();
    const std::size_t endo_states = std::size_t{1} << ne;
    const std::size_t bb_states = std::size_t{1} << nb;
    const double bb_weight = 1.0 / static_cast<double>(bb_states);

    std::size_t frozen_bits = 0;
    for (const auto& [e, v] : c.frozen) {
        if (v) frozen_bits |= std::size_t{1} << e;
    }

    auto micro_state = [&](std::size_t a, std::size_t u) {
        std::size_t s = frozen_bits;
        for (std::size_t k = 0; k < ne; ++k) s |= ((a >> k) & 1u) << c.endogenous[k];
        for (std::size_t k = 0; k < nb; ++k) s |= ((u >> k) & 1u) << c.blackboxed[k];
        return s;
    };

    // dynamics of the endogenous block with black boxes averaged out
    std::vector<double> endo_flat(endo_states * endo_states, 0.0);
    std::vector<double> p_on(ne);
    std::vector<double> joint;
    for (std::size_t a = 0; a < endo_states; ++a) {
        for (std::size_t u = 0; u < bb_states; ++u) {
            const std::size_t s = micro_state(a, u);
            for (std::size_t k = 0; k < ne; ++k) {
                const auto& el = g.element(c.endogenous[k]);
                p_on[k] = el.rule.table[detail::input_state(el, s)];
            }
            detail::expand_joint(p_on, joint);
            double* row = endo_flat.data() + a * endo_states;
            for (std::size_t b = 0; b < endo_states; ++b) row[b] += bb_weight * joint[b];
        }
    }
    const Tpm endo_tpm(Tpm::Unchecked{}, endo_states, std::move(endo_flat));

    ModelChoice grouping_choice;
    grouping_choice.endogenous.resize(endo_states);
    std::iota(grouping_choice.endogenous.begin(), grouping_choice.endogenous.end(), 0);
    grouping_choice.partition = c.grouping;
    Tpm macro = macro_tpm(endo_tpm, grouping_choice);

    // warped intervention over the full micro space
    const int m = c.grouping.m();
    const auto bsizes = c.grouping.block_sizes();
    std::vector<double> w(std::size_t{1} << nel, 0.0);
    for (std::size_t a = 0; a < endo_states; ++a) {
        const double mass =
            (1.0 / m) / static_cast<double>(bsizes[c.grouping.block_of(a)]) * bb_weight;
        for (std::size_t u = 0; u < bb_states; ++u) w[micro_state(a, u)] += mass;
    }
    return {std::move(macro), Dist(Dist::Unchecked{}, std::move(w))};
}

}  // namespace emergence
