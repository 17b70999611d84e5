#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyell/geometry.hpp"

namespace polyell {

using json = nlohmann::ordered_json;

/// Parsed run configuration. The polygon comes from one of
///   {"f": [f1, f2, f3]}, {"sides": [L1, L2, L3]}, {"square": {"f": x}}.
/// Unknown keys are rejected.
struct RunConfig {
    std::vector<double> f;

    std::vector<double> mu_list;  // explicit mu isoline values
    double mu_max = 2.0;
    int mu_count = 7;
    int theta_count = 48;

    std::string format = "svg";  // svg | csv | json
    double k = 1.0;
    int eigen_count = 6;
    int grid_n = 600;
    double mu_profile = 1.1;
    double lambda = 0.0;
    std::string bc = "dirichlet";
    int radial_steps = 2000;
    double radial_mu_max = 3.0;
    std::string sector;  // radial gauge sector id; default: first true sector
    std::map<std::string, double> tolerances;

    json echo;  // the raw config, for report echoes

    PolygonSpec polygon() const { return build_polygon(f); }
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

inline std::vector<double> number_list(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty()) throw ConfigError("\"" + key + "\" must be a non-empty array");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("\"" + key + "\" must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    detail::reject_unknown(j, {"f", "sides", "square", "grid", "format", "k", "eigen_count",
                               "grid_n", "mu_profile", "lambda", "bc", "radial_steps",
                               "radial_mu_max", "sector", "tolerances"},
                           "config");
    RunConfig cfg;
    cfg.echo = j;

    const int poly_keys = static_cast<int>(j.count("f") + j.count("sides") + j.count("square"));
    if (poly_keys != 1)
        throw ConfigError("exactly one of \"f\", \"sides\", \"square\" is required");
    if (j.count("f")) {
        cfg.f = detail::number_list(j.at("f"), "f");
    } else if (j.count("sides")) {
        for (double s : detail::number_list(j.at("sides"), "sides")) cfg.f.push_back(0.5 * s);
    } else {
        const json& sq = j.at("square");
        if (!sq.is_object()) throw ConfigError("\"square\" must be an object");
        detail::reject_unknown(sq, {"f"}, "square");
        if (!sq.count("f") || !sq.at("f").is_number())
            throw ConfigError("\"square\" requires a numeric \"f\"");
        cfg.f.assign(4, sq.at("f").get<double>());
    }

    if (j.count("grid")) {
        const json& g = j.at("grid");
        if (!g.is_object()) throw ConfigError("\"grid\" must be an object");
        detail::reject_unknown(g, {"mu_list", "mu_max", "mu_count", "theta_count"}, "grid");
        if (g.count("mu_list")) cfg.mu_list = detail::number_list(g.at("mu_list"), "mu_list");
        if (g.count("mu_max")) cfg.mu_max = g.at("mu_max").get<double>();
        if (g.count("mu_count")) cfg.mu_count = g.at("mu_count").get<int>();
        if (g.count("theta_count")) cfg.theta_count = g.at("theta_count").get<int>();
    }
    if (j.count("format")) cfg.format = j.at("format").get<std::string>();
    if (j.count("k")) cfg.k = j.at("k").get<double>();
    if (j.count("eigen_count")) cfg.eigen_count = j.at("eigen_count").get<int>();
    if (j.count("grid_n")) cfg.grid_n = j.at("grid_n").get<int>();
    if (j.count("mu_profile")) cfg.mu_profile = j.at("mu_profile").get<double>();
    if (j.count("lambda")) cfg.lambda = j.at("lambda").get<double>();
    if (j.count("bc")) cfg.bc = j.at("bc").get<std::string>();
    if (j.count("radial_steps")) cfg.radial_steps = j.at("radial_steps").get<int>();
    if (j.count("radial_mu_max")) cfg.radial_mu_max = j.at("radial_mu_max").get<double>();
    if (j.count("sector")) cfg.sector = j.at("sector").get<std::string>();
    if (j.count("tolerances")) {
        const json& tl = j.at("tolerances");
        if (!tl.is_object()) throw ConfigError("\"tolerances\" must be an object");
        for (auto it = tl.begin(); it != tl.end(); ++it)
            cfg.tolerances[it.key()] = it.value().get<double>();
    }

    if (cfg.mu_count < 2 || cfg.theta_count < 2)
        throw ConfigError("grid counts must be at least 2");
    for (double m : cfg.mu_list)
        if (m < 0.0) throw ConfigError("mu values must be non-negative");
    if (!(cfg.mu_max > 0.0)) throw ConfigError("mu_max must be positive");
    if (cfg.format != "svg" && cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("format must be svg, csv or json");
    if (cfg.bc != "dirichlet" && cfg.bc != "unit")
        throw ConfigError("bc must be dirichlet or unit");
    if (cfg.eigen_count < 1 || cfg.grid_n < 32 || cfg.radial_steps < 2)
        throw ConfigError("solver grid parameters out of range");
    return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace polyell
