// Copyright 2026 The hycqm Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "hycqm/model.hpp"

namespace hycqm {

using json = nlohmann::ordered_json;

namespace detail {

inline json expr_to_json(const QuadraticExpr& e) {
    json linear = json::object();
    for (const auto& [v, b] : e.linear()) linear[v] = b;
    json quadratic = json::array();
    for (const auto& [uv, b] : e.quadratic()) quadratic.push_back(json::array({uv.first, uv.second, b}));
    return json{{"linear", std::move(linear)}, {"quadratic", std::move(quadratic)}, {"offset", e.offset()}};
}

/// Field-path aware accessors; every failure becomes a ParseError naming the
/// offending field.
class Reader {
 public:
    [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
        throw ParseError(msg, 0, path);
    }

    static const json& member(const json& j, const std::string& path, const char* key) {
        if (!j.is_object()) fail(path, "expected an object");
        auto it = j.find(key);
        if (it == j.end()) fail(path + "." + key, "missing field");
        return *it;
    }

    static double number(const json& j, const std::string& path) {
        if (!j.is_number()) fail(path, "expected a number");
        return j.get<double>();
    }

    static std::string string(const json& j, const std::string& path) {
        if (!j.is_string()) fail(path, "expected a string");
        return j.get<std::string>();
    }

    static QuadraticExpr expr(const json& j, const std::string& path) {
        if (!j.is_object()) fail(path, "expected an object");
        QuadraticExpr e;
        if (auto it = j.find("linear"); it != j.end()) {
            if (!it->is_object()) fail(path + ".linear", "expected an object of id: coefficient");
            for (const auto& [v, b] : it->items()) e.add_linear(v, number(b, path + ".linear." + v));
        }
        if (auto it = j.find("quadratic"); it != j.end()) {
            if (!it->is_array()) fail(path + ".quadratic", "expected an array of [id, id, coefficient]");
            for (std::size_t t = 0; t < it->size(); ++t) {
                const auto& term = (*it)[t];
                std::string tp = path + ".quadratic[" + std::to_string(t) + "]";
                if (!term.is_array() || term.size() != 3) fail(tp, "expected [id, id, coefficient]");
                e.add_quadratic(string(term[0], tp + "[0]"), string(term[1], tp + "[1]"),
                                number(term[2], tp + "[2]"));
            }
        }
        if (auto it = j.find("offset"); it != j.end()) e.set_offset(number(*it, path + ".offset"));
        return e;
    }
};

inline std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace detail

inline json to_json(const ConstrainedModel& m) {
    json vars = json::array();
    for (const auto& v : m.variables()) {
        json jv{{"id", v.id}, {"type", std::string(to_string(v.vartype))}};
        if (v.vartype != Vartype::BINARY) {
            jv["lower"] = v.lower;
            jv["upper"] = v.upper;
        }
        vars.push_back(std::move(jv));
    }
    json cons = json::array();
    for (const auto& c : m.constraints()) {
        cons.push_back(json{{"label", c.label},
                            {"lhs", detail::expr_to_json(c.lhs)},
                            {"sense", std::string(to_string(c.sense))},
                            {"rhs", c.rhs}});
    }
    json out{{"variables", std::move(vars)},
             {"objective", detail::expr_to_json(m.objective())},
             {"constraints", std::move(cons)}};
    if (!m.metadata().empty()) {
        json meta = json::object();
        for (const auto& [k, v] : m.metadata()) meta[k] = v;
        out["metadata"] = std::move(meta);
    }
    return out;
}

/// Parse a model document that has already been decoded to JSON.
inline ConstrainedModel model_from_json(const json& doc) {
    using R = detail::Reader;
    if (!doc.is_object()) R::fail("$", "expected a model object");

    std::vector<Variable> variables;
    const json& jvars = R::member(doc, "$", "variables");
    if (!jvars.is_array()) R::fail("$.variables", "expected an array");
    for (std::size_t i = 0; i < jvars.size(); ++i) {
        std::string p = "$.variables[" + std::to_string(i) + "]";
        const json& jv = jvars[i];
        Variable v;
        v.id = R::string(R::member(jv, p, "id"), p + ".id");
        try {
            v.vartype = vartype_from_string(R::string(R::member(jv, p, "type"), p + ".type"));
        } catch (const ValidationError& e) {
            R::fail(p + ".type", e.what());
        }
        if (v.vartype == Vartype::BINARY) {
            v.lower = 0;
            v.upper = 1;
        } else {
            v.lower = R::number(R::member(jv, p, "lower"), p + ".lower");
            v.upper = R::number(R::member(jv, p, "upper"), p + ".upper");
        }
        variables.push_back(std::move(v));
    }

    QuadraticExpr objective;
    if (auto it = doc.find("objective"); it != doc.end()) objective = R::expr(*it, "$.objective");

    std::vector<Constraint> constraints;
    if (auto it = doc.find("constraints"); it != doc.end()) {
        if (!it->is_array()) R::fail("$.constraints", "expected an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            std::string p = "$.constraints[" + std::to_string(k) + "]";
            const json& jc = (*it)[k];
            Constraint c;
            c.label = R::string(R::member(jc, p, "label"), p + ".label");
            c.lhs = R::expr(R::member(jc, p, "lhs"), p + ".lhs");
            try {
                c.sense = sense_from_string(R::string(R::member(jc, p, "sense"), p + ".sense"));
            } catch (const ValidationError& e) {
                throw ValidationError(p + ".sense: " + e.what());
            }
            c.rhs = R::number(R::member(jc, p, "rhs"), p + ".rhs");
            constraints.push_back(std::move(c));
        }
    }

    std::map<std::string, std::string> metadata;
    if (auto it = doc.find("metadata"); it != doc.end() && it->is_object()) {
        for (const auto& [k, v] : it->items()) metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }

    return ConstrainedModel(std::move(variables), std::move(objective), std::move(constraints),
                            std::move(metadata));
}

/// Parse model JSON text. Syntax errors report the line; schema errors
/// report the field path.
inline ConstrainedModel parse_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), detail::line_of(text, e.byte ? e.byte - 1 : 0), "");
    }
    return model_from_json(doc);
}

inline std::string dump_model(const ConstrainedModel& m, int indent = 1) { return to_json(m).dump(indent); }

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline ConstrainedModel read_model_file(const std::filesystem::path& path) {
    return parse_model(read_text_file(path));
}

inline void write_model_file(const std::filesystem::path& path, const ConstrainedModel& m) {
    write_text_file(path, dump_model(m) + "\n");
}

inline json to_json(const QuboModel& q, const Labels& labels) {
    json quadratic = json::array();
    for (const auto& [uv, b] : q.quadratic()) quadratic.push_back(json::array({uv.first, uv.second, b}));
    return json{{"num_variables", q.num_variables()},
                {"variables", labels.names()},
                {"linear", q.linear()},
                {"quadratic", std::move(quadratic)},
                {"offset", q.offset()}};
}

inline json to_json(const Sample& s) {
    json viol = json::object();
    for (const auto& [k, v] : s.violations) viol[k] = v;
    return json{{"energy", s.energy},
                {"feasible", s.feasible},
                {"values", std::vector<double>(s.assignment.values().begin(), s.assignment.values().end())},
                {"violations", std::move(viol)}};
}

inline json to_json(const SampleSet& ss) {
    json samples = json::array();
    for (const auto& s : ss) samples.push_back(to_json(s));
    return json{{"solver", ss.solver()},
                {"wall_time", ss.wall_time()},
                {"seed", ss.seed()},
                {"num_feasible", ss.num_feasible()},
                {"variables", ss.labels()->names()},
                {"samples", std::move(samples)}};
}

/// One row per sample: energy, feasible, wall_time.
inline std::string sampleset_csv(const SampleSet& ss) {
    std::ostringstream out;
    out.precision(17);
    out << "energy,feasible,wall_time\n";
    for (const auto& s : ss) out << s.energy << ',' << (s.feasible ? 1 : 0) << ',' << ss.wall_time() << '\n';
    return out.str();
}

}  // namespace hycqm
