#pragma once

#include <string>
#include <vector>

#include "emergence/errors.hpp"
#include "emergence/gate_network.hpp"
#include "emergence/model_space.hpp"
#include "emergence/tpm.hpp"

namespace emergence {

/// Names of the bundled example systems, all with known analytical values.
inline std::vector<std::string> fixture_names() {
    return {"m1",         "m2",      "m3",      "uniform8", "absorbing8",
            "hetero8",    "exogenous8", "coding4", "permutation4", "and2"};
}

inline bool fixture_is_network(const std::string& name) { return name == "and2"; }

/// The bundled boolean networks ("and2": two elements, each an AND gate of
/// both elements' previous states).
inline GateNetwork fixture_network(const std::string& name) {
    if (name == "and2") return and_network({{0, 1}, {0, 1}});
    throw UnknownFixture(name);
}

/// The bundled TPM fixtures.
inline Tpm fixture_tpm(const std::string& name) {
    const double th = 1.0 / 3.0;
    if (name == "m1") {
        return Tpm({{0, 0, 1, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}},
                   {"00", "01", "10", "11"});
    }
    if (name == "m2") {
        return Tpm({{th, th, th, 0}, {th, th, th, 0}, {0, 0, 0, 1}, {0, 0, 0, 1}},
                   {"00", "01", "10", "11"});
    }
    if (name == "m3") {
        return Tpm({{0.25, 0.25, 0.25, 0.25},
                    {0.25, 0.25, 0.25, 0.25},
                    {0.25, 0.25, 0.25, 0.25},
                    {0.25, 0.25, 0.25, 0.25}},
                   {"00", "01", "10", "11"});
    }
    if (name == "uniform8") {
        return uniform_tpm(8);
    }
    if (name == "absorbing8") {
        // seven transient states mixing uniformly plus one absorbing state
        const double s = 1.0 / 7.0;
        std::vector<std::vector<double>> rows(8, std::vector<double>(8, s));
        for (int i = 0; i < 8; ++i) rows[i][7] = 0.0;
        rows[7].assign(8, 0.0);
        rows[7][7] = 1.0;
        return Tpm(rows, {"s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"});
    }
    if (name == "hetero8") {
        // same block structure as absorbing8 but every transition profile differs
        const double q5 = 1.0 / 5.0, q6 = 1.0 / 6.0, q7 = 1.0 / 7.0, q9 = 1.0 / 9.0;
        return Tpm({{q5, q5, q5, q5, q5, 0, 0, 0},
                    {q7, 3 * q7, q7, 0, q7, 0, q7, 0},
                    {0, q6, q6, q6, q6, q6, q6, 0},
                    {q7, 0, q7, q7, q7, q7, 2 * q7, 0},
                    {q9, 2 * q9, 2 * q9, q9, 0, 2 * q9, q9, 0},
                    {q7, q7, q7, q7, q7, q7, q7, 0},
                    {q6, q6, 0, q6, q6, q6, q6, 0},
                    {0, 0, 0, 0, 0, 0, 0, 1}},
                   {"s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"});
    }
    if (name == "exogenous8") {
        // six fully random states plus two self-looping deterministic ones
        std::vector<std::vector<double>> rows(6, std::vector<double>(8, 0.125));
        rows.push_back({0, 0, 0, 0, 0, 0, 1, 0});
        rows.push_back({0, 0, 0, 0, 0, 0, 0, 1});
        return Tpm(rows, {"s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"});
    }
    if (name == "coding4") {
        return Tpm({{th, th, th, 0}, {th, th, th, 0}, {th, th, th, 0}, {0, 0, 0, 1}},
                   {"x1", "x2", "x3", "x4"});
    }
    if (name == "permutation4") {
        return Tpm({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}},
                   {"00", "01", "10", "11"});
    }
    throw UnknownFixture(name);
}

/// The model choice each fixture's emergence story is about (the grouping of
/// the transient block, the {s7,s8} restriction, the coding partition).
inline ModelChoice fixture_choice(const std::string& name) {
    if (name == "absorbing8" || name == "hetero8") {
        ModelChoice c;
        c.endogenous = {0, 1, 2, 3, 4, 5, 6, 7};
        c.partition = Partition({0, 0, 0, 0, 0, 0, 0, 1});
        c.description = "transient block vs absorbing state";
        return c;
    }
    if (name == "exogenous8") {
        ModelChoice c;
        c.endogenous = {6, 7};
        c.partition = Partition({0, 1});
        c.description = "deterministic tail endogenous, random states exogenous";
        return c;
    }
    if (name == "coding4") {
        ModelChoice c;
        c.endogenous = {0, 1, 2, 3};
        c.partition = Partition({0, 0, 0, 1});
        c.description = "macroscale code {x1,x2,x3} vs {x4}";
        return c;
    }
    throw UnknownFixture(name);
}

}  // namespace emergence
