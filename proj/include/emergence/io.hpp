#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "emergence/capacity.hpp"
#include "emergence/errors.hpp"
#include "emergence/gate_network.hpp"
#include "emergence/measures.hpp"
#include "emergence/model_space.hpp"
#include "emergence/search.hpp"
#include "emergence/tpm.hpp"

namespace emergence {

using json = nlohmann::json;

// nlohmann::json keeps object keys sorted and prints doubles with the
// shortest round-trip decimal representation, so every emitter here is
// byte-deterministic.

// -- TPM ---------------------------------------------------------------------

inline json to_json(const Tpm& t) {
    json j;
    j["n"] = t.n();
    if (!t.labels().empty()) j["labels"] = t.labels();
    json rows = json::array();
    for (std::size_t i = 0; i < t.n(); ++i) {
        rows.push_back(std::vector<double>(t.row(i).begin(), t.row(i).end()));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline Tpm tpm_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows")) {
        throw ParseError("TPM JSON needs an object with a \"rows\" field");
    }
    std::vector<std::vector<double>> rows;
    for (const auto& row : j.at("rows")) {
        rows.push_back(row.get<std::vector<double>>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("n") && j.at("n").get<std::size_t>() != rows.size()) {
        throw ParseError("declared n does not match the number of rows");
    }
    return validate_tpm(rows, std::move(labels));
}

/// CSV: n rows of n comma-separated reals; an optional first line of labels.
inline Tpm tpm_from_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (first) {
            first = false;
            try {
                (void)std::stod(fields.at(0));
            } catch (const std::exception&) {
                labels = fields;
                continue;
            }
        }
        std::vector<double> row;
        for (const auto& f : fields) {
            try {
                row.push_back(std::stod(f));
            } catch (const std::exception&) {
                throw ParseError("bad CSV number: '" + f + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty CSV input");
    return validate_tpm(rows, std::move(labels));
}

// -- model choices -----------------------------------------------------------

inline json to_json(const ModelChoice& c) {
    json j;
    j["endogenous"] = c.endogenous;
    j["partition"] = c.partition.assignment();
    j["description"] = c.description;
    return j;
}

inline ModelChoice model_choice_from_json(const json& j) {
    ModelChoice c;
    try {
        c.endogenous = j.at("endogenous").get<std::vector<int>>();
        c.partition = Partition(j.at("partition").get<std::vector<int>>());
        if (j.contains("description")) c.description = j.at("description");
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad model choice JSON: ") + e.what());
    }
    return c;
}

inline json to_json(const ElementChoice& c) {
    json j;
    j["endogenous"] = c.endogenous;
    json frozen = json::object();
    for (const auto& [e, v] : c.frozen) frozen[std::to_string(e)] = v;
    j["frozen"] = std::move(frozen);
    j["blackboxed"] = c.blackboxed;
    j["grouping"] = c.grouping.assignment();
    j["description"] = c.description;
    return j;
}

inline ElementChoice element_choice_from_json(const json& j) {
    ElementChoice c;
    try {
        c.endogenous = j.at("endogenous").get<std::vector<int>>();
        if (j.contains("frozen")) {
            for (const auto& [key, value] : j.at("frozen").items()) {
                c.frozen[std::stoi(key)] = value.get<int>();
            }
        }
        if (j.contains("blackboxed")) {
            c.blackboxed = j.at("blackboxed").get<std::vector<int>>();
        }
        c.grouping = Partition(j.at("grouping").get<std::vector<int>>());
        if (j.contains("description")) c.description = j.at("description");
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad element choice JSON: ") + e.what());
    }
    return c;
}

// -- gate networks -----------------------------------------------------------

inline json to_json(const GateNetwork& g) {
    json elements = json::array();
    for (const auto& el : g.elements()) {
        json je;
        je["name"] = el.name;
        je["inputs"] = el.inputs;
        const std::size_t fan_in = el.inputs.size();
        if (el.rule.table == and_rule(fan_in).table) {
            je["rule"] = "AND";
        } else if (el.rule.table == or_rule(fan_in).table) {
            je["rule"] = "OR";
        } else if (el.rule.table == xor_rule(fan_in).table) {
            je["rule"] = "XOR";
        } else if (fan_in == 1 && el.rule.table == copy_rule().table) {
            je["rule"] = "COPY";
        } else {
            je["rule"] = json{{"table", el.rule.table}};
        }
        elements.push_back(std::move(je));
    }
    return json{{"elements", std::move(elements)}};
}

inline GateNetwork network_from_json(const json& j) {
    std::vector<GateElement> els;
    try {
        for (const auto& je : j.at("elements")) {
            GateElement el;
            el.name = je.contains("name") ? je.at("name").get<std::string>()
                                          : "E" + std::to_string(els.size());
            el.inputs = je.at("inputs").get<std::vector<int>>();
            const auto& rule = je.at("rule");
            if (rule.is_string()) {
                const std::string r = rule.get<std::string>();
                if (r == "AND") {
                    el.rule = and_rule(el.inputs.size());
                } else if (r == "OR") {
                    el.rule = or_rule(el.inputs.size());
                } else if (r == "XOR") {
                    el.rule = xor_rule(el.inputs.size());
                } else if (r == "COPY") {
                    el.rule = copy_rule();
                } else {
                    throw ParseError("unknown rule '" + r + "'");
                }
            } else {
                el.rule.table = rule.at("table").get<std::vector<double>>();
            }
            els.push_back(std::move(el));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad network JSON: ") + e.what());
    }
    return GateNetwork(std::move(els));
}

// -- reports and results -----------------------------------------------------

inline json to_json(const CausalReport& r) {
    json j;
    j["ei"] = r.ei;
    j["eff"] = r.effectiveness;
    j["determinism"] = r.determinism;
    j["degeneracy"] = r.degeneracy;
    j["size"] = r.size;
    j["intervention_entropy"] = r.intervention_entropy;
    j["effect_info"] = r.effect_info_per_state;
    return j;
}

inline json to_json(const CapacityResult& r) {
    json j;
    j["capacity"] = r.capacity;
    j["optimal_input"] = r.optimal_input.vec();
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    return j;
}

inline json to_json(const CodingResult& r) {
    json j;
    j["rate"] = r.rate;
    j["symbol_error_rate"] = r.symbol_error_rate;
    j["transitions_used"] = r.transitions_used;
    return j;
}

inline json to_json(const SearchResult& r) {
    json j;
    j["best_ei"] = r.best_ei;
    j["best_choice"] = r.best_element_choice ? to_json(*r.best_element_choice)
                                             : to_json(r.best_choice);
    j["evaluated"] = r.evaluated;
    j["skipped_leaky"] = r.skipped_leaky;
    j["method"] = r.method;
    j["warped_id"] = r.warped_id.vec();
    return j;
}

inline json to_json(const EmergenceGap& g) {
    json j;
    j["micro_ei"] = g.micro_ei;
    j["cc"] = g.cc;
    j["capacity"] = g.capacity;
    j["emergence"] = g.emergence;
    j["capacity_gap"] = g.capacity_gap;
    return j;
}

inline json to_json(const LadderReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        json jr;
        jr["level"] = row.level;
        jr["ei_max"] = row.ei_max;
        jr["warped_id"] = row.warped_id.vec();
        jr["emd"] = row.emd_to_capacity_input;
        jr["choices_evaluated"] = row.choices_evaluated;
        if (row.best_choice) jr["best_choice"] = to_json(*row.best_choice);
        if (row.best_element_choice) {
            jr["best_choice"] = to_json(*row.best_element_choice);
        }
        rows.push_back(std::move(jr));
    }
    json j;
    j["capacity"] = report.capacity;
    j["capacity_input"] = report.capacity_input.vec();
    j["ladder"] = std::move(rows);
    return j;
}

/// Plot-ready CSV with one row per ladder level.
inline std::string ladder_csv(const LadderReport& report) {
    std::ostringstream out;
    out << "level,ei_max,capacity,emd,choices_evaluated\n";
    for (const auto& row : report.rows) {
        out << row.level << ',' << json(row.ei_max).dump() << ','
            << json(report.capacity).dump() << ',' << json(row.emd_to_capacity_input).dump()
            << ',' << row.choices_evaluated << '\n';
    }
    return out.str();
}

// -- files -------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

inline bool file_looks_like_network(const json& j) {
    return j.is_object() && j.contains("elements");
}

/// Reads a TPM from .json or .csv, applying full validation.
inline Tpm read_tpm_file(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open '" + path + "'");
        return tpm_from_csv(in);
    }
    return tpm_from_json(read_json_file(path));
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << text;
}

}  // namespace emergence
