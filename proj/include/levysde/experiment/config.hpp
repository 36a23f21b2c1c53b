#pragma once

#include "levysde/core/error.hpp"
#include "levysde/experiment/scenarios.hpp"
#include "levysde/model/modulus.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace levysde {

struct DiagnosticToggles {
    bool assumption1 = true;
    bool osgood = true;
    bool moment_bound = true;
    bool cauchy = true;
    bool uniqueness = true;
    bool analytic_mean = true;
    bool stability = true;
    std::vector<double> stability_eps{0.1, 1.0, 2.0, 10.0};
};

/// Validated experiment description; see docs/config.md for the file schema.
struct ExperimentConfig {
    std::string scenario;
    std::map<std::string, double> params;
    std::optional<std::string> modulus;  // overrides the scenario's declared modulus
    std::map<std::string, double> modulus_params;
    double horizon = 1.0;
    std::size_t steps = 256;
    std::size_t paths = 1000;
    std::uint64_t seed = 1;
    std::size_t max_iter = 50;
    double solver_tol = 1e-6;
    double quadrature_tol = 1e-9;
    double assumption_tol = 1e-9;
    std::size_t verifier_pairs = 20000;
    double verifier_radius = 1.0;
    double verifier_near_origin = 0.3;
    DiagnosticToggles diagnostics;
    std::optional<std::string> output_dir;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["scenario"] = scenario;
        j["params"] = params;
        if (modulus) j["modulus"] = {{"name", *modulus}, {"params", modulus_params}};
        j["grid"] = {{"T", horizon}, {"M", steps}};
        j["paths"] = paths;
        j["seed"] = seed;
        j["max_iter"] = max_iter;
        j["tolerances"] = {{"solver", solver_tol}, {"quadrature", quadrature_tol}, {"assumption1", assumption_tol}};
        j["verifier"] = {{"pairs", verifier_pairs}, {"box_radius", verifier_radius},
                         {"near_origin_fraction", verifier_near_origin}};
        j["diagnostics"] = {{"assumption1", diagnostics.assumption1},
                            {"osgood", diagnostics.osgood},
                            {"moment_bound", diagnostics.moment_bound},
                            {"cauchy", diagnostics.cauchy},
                            {"uniqueness", diagnostics.uniqueness},
                            {"analytic_mean", diagnostics.analytic_mean},
                            {"stability", {{"enabled", diagnostics.stability}, {"eps", diagnostics.stability_eps}}}};
        if (output_dir) j["output_dir"] = *output_dir;
        return j;
    }
};

/// All validation problems found in a config, reported together.
class ConfigValidationError : public ConfigError {
public:
    explicit ConfigValidationError(std::vector<std::string> problems)
        : ConfigError(join(problems)), problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& ps) {
        std::string s = "invalid experiment config:";
        for (const auto& p : ps) s += "\n  " + p;
        return s;
    }
    std::vector<std::string> problems_;
};

namespace detail {

inline std::string joined(const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
    return s;
}

/// Reads j[key] into out when present; records a problem on a type mismatch.
template <typename T>
void read_field(const nlohmann::json& j, const char* key, const std::string& path, T& out,
                std::vector<std::string>& problems) {
    if (!j.contains(key)) return;
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        const auto& v = j.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            problems.push_back(path + key + ": must be a nonnegative integer");
            return;
        }
    }
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        problems.push_back(path + key + ": wrong type (" + std::string(j.at(key).type_name()) + ")");
    }
}

inline void read_number_map(const nlohmann::json& j, const std::string& path, std::map<std::string, double>& out,
                            std::vector<std::string>& problems) {
    if (!j.is_object()) {
        problems.push_back(path + ": must be an object of numbers");
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number())
            problems.push_back(path + "." + it.key() + ": must be a number");
        else
            out[it.key()] = it.value().get<double>();
    }
}

inline void reject_unknown(const nlohmann::json& j, const std::string& path, const std::set<std::string>& allowed,
                           std::vector<std::string>& problems) {
    if (!j.is_object()) return;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) problems.push_back(path + it.key() + ": unknown field");
}

}  // namespace detail

/// Parses and validates a config document. Collects every problem before
/// throwing ConfigValidationError.
inline ExperimentConfig parse_config_json(const nlohmann::json& j) {
    std::vector<std::string> problems;
    ExperimentConfig cfg;
    if (!j.is_object()) throw ConfigValidationError({"config: top level must be an object"});

    detail::reject_unknown(j, "",
                           {"scenario", "params", "modulus", "grid", "paths", "seed", "max_iter", "tolerances",
                            "verifier", "diagnostics", "output_dir"},
                           problems);

    if (!j.contains("scenario") || !j.at("scenario").is_string()) {
        problems.push_back("scenario: required string; known: " + detail::joined(scenarios::names()));
    } else {
        cfg.scenario = j.at("scenario").get<std::string>();
        if (!scenarios::known(cfg.scenario))
            problems.push_back("scenario: unknown '" + cfg.scenario + "'; known: " + detail::joined(scenarios::names()));
    }
    if (j.contains("params")) detail::read_number_map(j.at("params"), "params", cfg.params, problems);

    if (j.contains("modulus")) {
        const auto& m = j.at("modulus");
        if (m.is_string()) {
            cfg.modulus = m.get<std::string>();
        } else if (m.is_object() && m.contains("name") && m.at("name").is_string()) {
            detail::reject_unknown(m, "modulus.", {"name", "params"}, problems);
            cfg.modulus = m.at("name").get<std::string>();
            if (m.contains("params")) detail::read_number_map(m.at("params"), "modulus.params", cfg.modulus_params, problems);
        } else {
            problems.push_back("modulus: must be a name or {\"name\": ..., \"params\": {...}}");
        }
        if (cfg.modulus) {
            const auto known = moduli::names();
            if (std::find(known.begin(), known.end(), *cfg.modulus) == known.end())
                problems.push_back("modulus: unknown '" + *cfg.modulus + "'; known: " + detail::joined(known));
        }
    }

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        detail::reject_unknown(g, "grid.", {"T", "M"}, problems);
        detail::read_field(g, "T", "grid.", cfg.horizon, problems);
        detail::read_field(g, "M", "grid.", cfg.steps, problems);
    }
    detail::read_field(j, "paths", "", cfg.paths, problems);
    detail::read_field(j, "seed", "", cfg.seed, problems);
    detail::read_field(j, "max_iter", "", cfg.max_iter, problems);

    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        detail::reject_unknown(t, "tolerances.", {"solver", "quadrature", "assumption1"}, problems);
        detail::read_field(t, "solver", "tolerances.", cfg.solver_tol, problems);
        detail::read_field(t, "quadrature", "tolerances.", cfg.quadrature_tol, problems);
        detail::read_field(t, "assumption1", "tolerances.", cfg.assumption_tol, problems);
    }
    if (j.contains("verifier")) {
        const auto& v = j.at("verifier");
        detail::reject_unknown(v, "verifier.", {"pairs", "box_radius", "near_origin_fraction"}, problems);
        detail::read_field(v, "pairs", "verifier.", cfg.verifier_pairs, problems);
        detail::read_field(v, "box_radius", "verifier.", cfg.verifier_radius, problems);
        detail::read_field(v, "near_origin_fraction", "verifier.", cfg.verifier_near_origin, problems);
    }
    if (j.contains("diagnostics")) {
        const auto& d = j.at("diagnostics");
        detail::reject_unknown(d, "diagnostics.",
                               {"assumption1", "osgood", "moment_bound", "cauchy", "uniqueness", "analytic_mean",
                                "stability"},
                               problems);
        auto& t = cfg.diagnostics;
        detail::read_field(d, "assumption1", "diagnostics.", t.assumption1, problems);
        detail::read_field(d, "osgood", "diagnostics.", t.osgood, problems);
        detail::read_field(d, "moment_bound", "diagnostics.", t.moment_bound, problems);
        detail::read_field(d, "cauchy", "diagnostics.", t.cauchy, problems);
        detail::read_field(d, "uniqueness", "diagnostics.", t.uniqueness, problems);
        detail::read_field(d, "analytic_mean", "diagnostics.", t.analytic_mean, problems);
        if (d.contains("stability")) {
            const auto& s = d.at("stability");
            if (s.is_boolean()) {
                t.stability = s.get<bool>();
            } else {
                detail::reject_unknown(s, "diagnostics.stability.", {"enabled", "eps"}, problems);
                detail::read_field(s, "enabled", "diagnostics.stability.", t.stability, problems);
                detail::read_field(s, "eps", "diagnostics.stability.", t.stability_eps, problems);
            }
        }
    }
    if (j.contains("output_dir")) {
        if (j.at("output_dir").is_string())
            cfg.output_dir = j.at("output_dir").get<std::string>();
        else
            problems.push_back("output_dir: must be a string");
    }

    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) problems.push_back("grid.T: must be > 0");
    if (cfg.steps == 0 || !std::has_single_bit(cfg.steps))
        problems.push_back("grid.M: must be a power of two (got " + std::to_string(cfg.steps) + ")");
    if (cfg.paths < 2) problems.push_back("paths: must be >= 2 (got " + std::to_string(cfg.paths) + ")");
    if (!(cfg.solver_tol > 0.0)) problems.push_back("tolerances.solver: must be > 0");
    if (!(cfg.quadrature_tol > 0.0)) problems.push_back("tolerances.quadrature: must be > 0");
    if (!(cfg.assumption_tol > 0.0)) problems.push_back("tolerances.assumption1: must be > 0");
    if (cfg.verifier_pairs == 0) problems.push_back("verifier.pairs: must be > 0");
    if (!(cfg.verifier_radius > 0.0)) problems.push_back("verifier.box_radius: must be > 0");
    if (!(cfg.verifier_near_origin >= 0.0 && cfg.verifier_near_origin <= 1.0))
        problems.push_back("verifier.near_origin_fraction: must lie in [0, 1]");
    for (double e : cfg.diagnostics.stability_eps)
        if (!(e > 0.0)) problems.push_back("diagnostics.stability.eps: values must be > 0");

    if (!problems.empty()) throw ConfigValidationError(std::move(problems));
    return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigValidationError({std::string("config: malformed JSON: ") + e.what()});
    }
    return parse_config_json(j);
}

inline ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace levysde
