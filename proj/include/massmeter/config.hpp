#pragma once
/// Run configuration: JSON parsing, validation against the shipped schema and
/// conversion into DomainSpec / SolverParams / experiment settings.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "massmeter/error.hpp"
#include "massmeter/geometry.hpp"
#include "massmeter/schemas.hpp"
#include "massmeter/verify.hpp"

namespace massmeter {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Schema validation
// ---------------------------------------------------------------------------

/// Validates `doc` against the subset of JSON Schema used by the shipped
/// schemas: type, properties, required, additionalProperties (false), enum,
/// minimum, exclusiveMinimum, maximum, items, minItems, maxItems. Throws
/// ConfigError naming the offending key path.
class SchemaValidator {
public:
    explicit SchemaValidator(Json schema) : schema_(std::move(schema)) {}

    void validate(const Json& doc) const { check(schema_, doc, ""); }

private:
    Json schema_;

    static std::string where(const std::string& path) { return path.empty() ? "<root>" : path; }

    static bool type_matches(const std::string& type, const Json& v) {
        if (type == "object") return v.is_object();
        if (type == "array") return v.is_array();
        if (type == "string") return v.is_string();
        if (type == "boolean") return v.is_boolean();
        if (type == "integer") {
            if (v.is_number_integer()) return true;
            return v.is_number_float() && std::floor(v.get<double>()) == v.get<double>();
        }
        if (type == "number") return v.is_number();
        if (type == "null") return v.is_null();
        return false;
    }

    void check(const Json& s, const Json& v, const std::string& path) const {
        if (s.contains("type")) {
            const auto type = s["type"].get<std::string>();
            if (!type_matches(type, v)) throw ConfigError(where(path) + ": expected " + type);
        }
        if (s.contains("enum")) {
            bool found = false;
            for (const auto& e : s["enum"])
                if (e == v) found = true;
            if (!found) throw ConfigError(where(path) + ": value " + v.dump() + " not allowed");
        }
        if (v.is_number()) {
            const double x = v.get<double>();
            if (s.contains("minimum") && x < s["minimum"].get<double>())
                throw ConfigError(where(path) + ": below minimum " + s["minimum"].dump());
            if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>())
                throw ConfigError(where(path) + ": must exceed " + s["exclusiveMinimum"].dump());
            if (s.contains("maximum") && x > s["maximum"].get<double>())
                throw ConfigError(where(path) + ": above maximum " + s["maximum"].dump());
        }
        if (v.is_object()) {
            const Json props = s.value("properties", Json::object());
            if (s.contains("required"))
                for (const auto& r : s["required"]) {
                    const auto key = r.get<std::string>();
                    if (!v.contains(key)) throw ConfigError(join(path, key) + ": required key missing");
                }
            const bool closed = s.contains("additionalProperties") && s["additionalProperties"] == false;
            for (const auto& [key, val] : v.items()) {
                if (props.contains(key)) {
                    check(props[key], val, join(path, key));
                } else if (closed) {
                    throw ConfigError(join(path, key) + ": unknown key");
                }
            }
        }
        if (v.is_array()) {
            if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
                throw ConfigError(where(path) + ": needs at least " + s["minItems"].dump() + " items");
            if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>())
                throw ConfigError(where(path) + ": allows at most " + s["maxItems"].dump() + " items");
            if (s.contains("items"))
                for (std::size_t i = 0; i < v.size(); ++i)
                    check(s["items"], v[i], where(path) + "[" + std::to_string(i) + "]");
        }
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }
};

inline const SchemaValidator& run_config_validator() {
    static const SchemaValidator v(Json::parse(schemas::run_config));
    return v;
}

inline const SchemaValidator& report_validator() {
    static const SchemaValidator v(Json::parse(schemas::report));
    return v;
}

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

struct Tolerances {
    double side_mass_relative = 0.02;
    double rellich_r0 = 0.04;
    double rellich_x = 0.02;
    double rellich_y = 0.02;
    double identity_relative = 0.02;
    double ydy = 0.02;
    double slope_min = 0.8;
    double c_mass_factor = 1.1;
    double c_mass_growth = 0.2;
};

struct ExperimentSettings {
    std::vector<double> epsilon_grid{0.0125, 0.025, 0.05, 0.1};
    std::vector<int> levels{24, 48, 96};
    bool extrapolate = true;
    Tolerances tolerances;
};

struct OutputSettings {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};

    [[nodiscard]] bool wants(const std::string& fmt) const {
        for (const auto& f : formats)
            if (f == fmt) return true;
        return false;
    }
};

struct RunConfig {
    DomainSpec domain;
    SolverParams solver;
    ExperimentSettings experiment;
    OutputSettings output;
};

namespace detail {

template <class T>
void read_if(const Json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj[key].get<T>();
}

} // namespace detail

/// Builds a RunConfig from a parsed document. Schema validation runs first, so
/// the remaining checks are the ones JSON Schema cannot express.
inline RunConfig parse_config(const Json& doc) {
    run_config_validator().validate(doc);
    RunConfig cfg;

    const Json& d = doc["domain"];
    DomainSpec& s = cfg.domain;
    s.l = d["l"].get<double>();
    s.a1 = d["a1"].get<double>();
    s.a2 = d["a2"].get<double>();
    s.orientation = d["orientation"] == "obtuse" ? Orientation::obtuse : Orientation::acute;
    detail::read_if(d, "epsilon", s.epsilon);
    if (d.contains("gtilde")) {
        auto coeffs = d["gtilde"]["sine_coefficients"].get<std::vector<double>>();
        const bool normalize = d["gtilde"].value("normalize", true);
        if (normalize) {
            s.gtilde = PerturbationFn::normalized(std::move(coeffs), s.l);
        } else {
            s.gtilde = PerturbationFn(std::move(coeffs), s.l);
            if (!s.gtilde.within_bounds())
                throw RangeError("domain.gtilde: |g~| <= 1 and |g~'| <= 1 violated; set normalize");
        }
    }
    if (d.contains("wtilde")) {
        std::vector<Monomial> terms;
        for (const auto& t : d["wtilde"]["polynomial"])
            terms.push_back(Monomial{t["px"].get<int>(), t["py"].get<int>(), t["coef"].get<double>()});
        const bool normalize = d["wtilde"].value("normalize", true);
        const auto tri = s.corners();
        if (normalize) {
            s.wtilde = PotentialFn::normalized(std::move(terms), tri);
        } else {
            s.wtilde = PotentialFn(std::move(terms));
            if (!s.wtilde->within_bounds(tri))
                throw RangeError("domain.wtilde: |w~| <= 1 and |grad w~| <= 1 violated; set normalize");
        }
    }
    validate(s);

    if (doc.contains("solver")) {
        const Json& j = doc["solver"];
        detail::read_if(j, "element_order", cfg.solver.element_order);
        detail::read_if(j, "n", cfg.solver.n);
        detail::read_if(j, "k", cfg.solver.k);
        detail::read_if(j, "tol", cfg.solver.tol);
        detail::read_if(j, "seed", cfg.solver.seed);
        detail::read_if(j, "threads", cfg.solver.threads);
    }
    if (doc.contains("experiment")) {
        const Json& j = doc["experiment"];
        auto& e = cfg.experiment;
        detail::read_if(j, "epsilon_grid", e.epsilon_grid);
        detail::read_if(j, "levels", e.levels);
        detail::read_if(j, "extrapolate", e.extrapolate);
        for (std::size_t i = 1; i < e.epsilon_grid.size(); ++i)
            if (!(e.epsilon_grid[i] > e.epsilon_grid[i - 1]))
                throw ConfigError("experiment.epsilon_grid: must be strictly increasing");
        for (std::size_t i = 1; i < e.levels.size(); ++i)
            if (!(e.levels[i] > e.levels[i - 1])) throw ConfigError("experiment.levels: must be strictly increasing");
        if (j.contains("tolerances")) {
            const Json& t = j["tolerances"];
            auto& tol = e.tolerances;
            detail::read_if(t, "side_mass_relative", tol.side_mass_relative);
            detail::read_if(t, "rellich_r0", tol.rellich_r0);
            detail::read_if(t, "rellich_x", tol.rellich_x);
            detail::read_if(t, "rellich_y", tol.rellich_y);
            detail::read_if(t, "identity_relative", tol.identity_relative);
            detail::read_if(t, "ydy", tol.ydy);
            detail::read_if(t, "slope_min", tol.slope_min);
            detail::read_if(t, "c_mass_factor", tol.c_mass_factor);
            detail::read_if(t, "c_mass_growth", tol.c_mass_growth);
        }
    }
    if (doc.contains("output")) {
        detail::read_if(doc["output"], "directory", cfg.output.directory);
        detail::read_if(doc["output"], "formats", cfg.output.formats);
    }
    return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace massmeter
