#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "emergence/fixtures.hpp"
#include "emergence/gate_network.hpp"
#include "emergence/measures.hpp"
#include "emergence/rng.hpp"
#include "emergence/search.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace emergence;
using Catch::Approx;

namespace {
// brute-force targets for the two-element AND system, derived by enumerating
// the four-state update by hand: states 00, 01, 10 -> 00 and 11 -> 11
const double kAnd2MicroEi = (3.0 * std::log2(4.0 / 3.0) + 2.0) / 4.0;
// one element black-boxed: [[1,0],[1/2,1/2]] against E_D = [3/4, 1/4]
const double kAnd2BlackboxEi =
    0.5 * (std::log2(4.0 / 3.0) +
           0.5 * std::log2(0.5 / 0.75) + 0.5 * std::log2(0.5 / 0.25));
}  // namespace

TEST_CASE("rule constructors") {
    CHECK(and_rule(2).table == std::vector<double>{0, 0, 0, 1});
    CHECK(or_rule(2).table == std::vector<double>{0, 1, 1, 1});
    CHECK(xor_rule(2).table == std::vector<double>{0, 1, 1, 0});
    CHECK(copy_rule().table == std::vector<double>{0, 1});
}

TEST_CASE("network validation") {
    GateElement bad;
    bad.name = "X";
    bad.inputs = {0, 0};
    bad.rule.table = {0.0, 1.0, 0.0};  // three entries for fan-in two
    CHECK_THROWS_AS(GateNetwork({bad}), FanInStateMissing);

    bad.rule.table = {0.0, 1.0, 0.0, 2.0};
    CHECK_THROWS_AS(GateNetwork({bad}), InvalidArgument);

    bad.rule = and_rule(2);
    bad.inputs = {0, 3};
    CHECK_THROWS_AS(GateNetwork({bad}), InvalidArgument);

    std::vector<std::pair<int, int>> wiring(21, {0, 0});
    CHECK_THROWS_AS(compile_tpm(and_network(wiring)), TooManyElements);
}

TEST_CASE("a self-wired copy element compiles to the identity bit") {
    GateElement el;
    el.name = "A";
    el.rule = copy_rule();
    el.inputs = {0};
    const Tpm t = compile_tpm(GateNetwork({el}));
    REQUIRE(t.n() == 2);
    CHECK(t(0, 0) == 1.0);
    CHECK(t(1, 1) == 1.0);
    CHECK(ei(t) == Approx(1.0).margin(1e-12));
}

TEST_CASE("a self-AND is a copy") {
    const Tpm t = compile_tpm(and_network({{0, 0}}));
    CHECK(t(0, 0) == 1.0);
    CHECK(t(1, 1) == 1.0);
}

TEST_CASE("the two-AND network matches its hand enumeration") {
    const Tpm t = compile_tpm(fixture_network("and2"));
    REQUIRE(t.n() == 4);
    for (std::size_t s = 0; s < 3; ++s) {
        CHECK(t(s, 0) == 1.0);  // 00, 01, 10 all collapse to 00
    }
    CHECK(t(3, 3) == 1.0);  // 11 holds itself
    CHECK(ei(t) == Approx(kAnd2MicroEi).margin(1e-12));
    CHECK(ei(t) == Approx(0.8113).margin(1e-4));
    CHECK(t.labels()[1] == "10");  // little-endian: state 1 is element 0 on
}

TEST_CASE("compiled rows match the direct per-bit oracle") {
    Rng rng(51);
    for (int it = 0; it < 60; ++it) {
        const std::size_t nel = 1 + rng.next_below(4);
        const GateNetwork g = gen::random_network(rng, nel, it % 2 == 0);
        const Tpm t = compile_tpm(g);
        for (std::size_t s = 0; s < t.n(); ++s) {
            const std::vector<double> expected = oracle::network_row(g, s);
            for (std::size_t j = 0; j < t.n(); ++j) {
                CHECK(t(s, j) == Approx(expected[j]).margin(1e-12));
            }
        }
    }
}

TEST_CASE("deterministic networks have determinism exactly 1") {
    Rng rng(52);
    for (int it = 0; it < 60; ++it) {
        const GateNetwork g = gen::random_network(rng, 1 + rng.next_below(4), true);
        CHECK(determinism(compile_tpm(g)) == 1.0);
    }
}

TEST_CASE("element choice validation") {
    const GateNetwork g = fixture_network("and2");
    ElementChoice c;
    CHECK_THROWS_AS(c.validate(2), EmptyEndogenous);
    c.endogenous = {0, 1};
    c.frozen[1] = 1;  // element in two roles
    c.grouping = Partition::singletons(4);
    CHECK_THROWS_AS(c.validate(2), InvalidChoice);
    c.frozen.clear();
    CHECK_NOTHROW(c.validate(2));
    c.grouping = Partition::singletons(2);  // wrong state count
    CHECK_THROWS_AS(c.validate(2), InvalidChoice);
    c.endogenous = {0};
    CHECK_THROWS_AS(c.validate(2), InvalidChoice);  // element 1 unassigned
}

TEST_CASE("the identity element choice reproduces the compiled TPM") {
    Rng rng(53);
    for (int it = 0; it < 40; ++it) {
        const std::size_t nel = 1 + rng.next_below(3);
        const GateNetwork g = gen::random_network(rng, nel, it % 2 == 0);
        const Tpm compiled = compile_tpm(g);
        const ElementModel model = apply_element_choice(g, ElementChoice::identity(g));
        REQUIRE(model.macro.n() == compiled.n());
        for (std::size_t i = 0; i < compiled.n(); ++i) {
            for (std::size_t j = 0; j < compiled.n(); ++j) {
                CHECK(model.macro(i, j) == Approx(compiled(i, j)).margin(1e-12));
            }
        }
        for (std::size_t i = 0; i < compiled.n(); ++i) {
            CHECK(model.micro_warped[i] ==
                  Approx(1.0 / static_cast<double>(compiled.n())).margin(1e-12));
        }
    }
}

TEST_CASE("freezing one input of the two-AND system leaves a perfect copy") {
    const GateNetwork g = fixture_network("and2");
    ElementChoice c;
    c.endogenous = {0};
    c.frozen[1] = 1;
    c.grouping = Partition::singletons(2);
    const ElementModel model = apply_element_choice(g, c);
    CHECK(model.macro(0, 0) == 1.0);
    CHECK(model.macro(1, 1) == 1.0);
    CHECK(ei(model.macro) == Approx(1.0).margin(1e-12));
    // ei rose above the micro value: causal emergence by freezing
    CHECK(ei(model.macro) > kAnd2MicroEi);

    // the warped intervention only touches states with element 1 clamped on
    CHECK(model.micro_warped[0] == 0.0);
    CHECK(model.micro_warped[2] == 0.5);
    CHECK(model.micro_warped[3] == 0.5);
}

TEST_CASE("black-boxing one input of the two-AND system") {
    const GateNetwork g = fixture_network("and2");
    ElementChoice c;
    c.endogenous = {0};
    c.blackboxed = {1};
    c.grouping = Partition::singletons(2);
    const ElementModel model = apply_element_choice(g, c);
    // brute force: next(A) = AND(A, B) with B uniform
    CHECK(model.macro(0, 0) == Approx(1.0).margin(1e-15));
    CHECK(model.macro(1, 0) == Approx(0.5).margin(1e-15));
    CHECK(model.macro(1, 1) == Approx(0.5).margin(1e-15));
    CHECK(ei(model.macro) == Approx(kAnd2BlackboxEi).margin(1e-12));
    CHECK(ei(model.macro) == Approx(0.3113).margin(1e-4));

    // the black-boxed element varies in the background of the intervention
    for (std::size_t s = 0; s < 4; ++s) {
        CHECK(model.micro_warped[s] == Approx(0.25).margin(1e-15));
    }
}

TEST_CASE("element choices commute with state-space coarse-graining") {
    Rng rng(54);
    for (int it = 0; it < 60; ++it) {
        const std::size_t nel = 2 + rng.next_below(3);
        const GateNetwork g = gen::random_network(rng, nel, it % 2 == 0);
        const std::size_t n = std::size_t{1} << nel;

        ElementChoice ec;
        ec.endogenous.resize(nel);
        std::iota(ec.endogenous.begin(), ec.endogenous.end(), 0);
        ec.grouping = gen::random_partition(rng, n);

        ModelChoice mc;
        mc.endogenous.resize(n);
        std::iota(mc.endogenous.begin(), mc.endogenous.end(), 0);
        mc.partition = ec.grouping;

        const Tpm via_elements = apply_element_choice(g, ec).macro;
        const Tpm via_states = macro_tpm(compile_tpm(g), mc);
        REQUIRE(via_elements.n() == via_states.n());
        for (std::size_t i = 0; i < via_states.n(); ++i) {
            for (std::size_t j = 0; j < via_states.n(); ++j) {
                CHECK(via_elements(i, j) == Approx(via_states(i, j)).margin(1e-12));
            }
        }
    }
}

TEST_CASE("freezing an element that feeds nothing endogenous changes nothing") {
    Rng rng(55);
    for (int it = 0; it < 40; ++it) {
        // elements 0 and 1 read only each other; element 2 reads them but
        // feeds no endogenous rule
        std::vector<GateElement> els(3);
        for (int e = 0; e < 2; ++e) {
            els[e].name = std::string(1, static_cast<char>('A' + e));
            els[e].inputs = {static_cast<int>(rng.next_below(2)),
                             static_cast<int>(rng.next_below(2))};
            els[e].rule.table.resize(4);
            for (auto& p : els[e].rule.table) p = rng.next_unit();
        }
        els[2].name = "C";
        els[2].inputs = {0, 1};
        els[2].rule = xor_rule(2);
        const GateNetwork g{els};

        ElementChoice frozen0;
        frozen0.endogenous = {0, 1};
        frozen0.frozen[2] = 0;
        frozen0.grouping = Partition::singletons(4);
        ElementChoice frozen1 = frozen0;
        frozen1.frozen[2] = 1;

        const GateNetwork sub({els[0], els[1]});
        const double base = ei(compile_tpm(sub));
        CHECK(ei(apply_element_choice(g, frozen0).macro) == Approx(base).margin(1e-12));
        CHECK(ei(apply_element_choice(g, frozen1).macro) == Approx(base).margin(1e-12));
    }
}

TEST_CASE("grouping elements expands to an order-invariant state partition") {
    // grouping both elements of a two-element system: states collapse by
    // their count of ones
    const Partition states = state_partition_from_element_grouping(
        Partition::single_block(2), 2);
    CHECK(states.assignment() == std::vector<int>({0, 1, 1, 2}));

    const Partition separate = state_partition_from_element_grouping(
        Partition::singletons(2), 2);
    CHECK(separate.m() == 4);

    // three elements, first two grouped: states with the same pair-count and
    // third-element value coincide
    const Partition mixed = state_partition_from_element_grouping(
        Partition({0, 0, 1}), 3);
    CHECK(mixed.block_of(1) == mixed.block_of(2));   // 100 and 010
    CHECK(mixed.block_of(5) == mixed.block_of(6));   // 101 and 011
    CHECK(mixed.block_of(0) != mixed.block_of(4));   // 000 vs 001
    CHECK(mixed.m() == 6);
}

TEST_CASE("degeneracy reduction drives emergence in deterministic networks") {
    const Tpm t = compile_tpm(fixture_network("and2"));
    const CausalReport micro = full_report(t);
    CHECK(micro.determinism == 1.0);
    CHECK(micro.degeneracy > 0.5);

    const SearchResult best = exhaustive_search(t, LadderLevel::CoarseGrain);
    const CausalReport macro = macro_ei(t, best.best_choice);
    CHECK(macro.determinism == Approx(1.0).margin(1e-12));
    CHECK(macro.degeneracy < micro.degeneracy - 0.1);
    CHECK(best.best_ei == Approx(1.0).margin(1e-9));
}
