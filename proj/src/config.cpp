#include "darboux/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "darboux/errors.hpp"

namespace darboux {

using nlohmann::json;

namespace {

json grid_to_json(const PolyGrid& g) {
    json rows = json::array();
    for (const auto& row : g.c) rows.push_back(row);
    return rows;
}

PolyGrid grid_from_json(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty())
        throw ConfigError("direction." + name + " must be a nonempty array of rows");
    PolyGrid g;
    std::size_t width = 0;
    for (const auto& row : j) {
        if (!row.is_array()) throw ConfigError("direction." + name + ": row is not an array");
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number()) throw ConfigError("direction." + name + ": non-numeric entry");
            r.push_back(v.get<double>());
        }
        width = std::max(width, r.size());
        g.c.push_back(std::move(r));
    }
    for (auto& row : g.c) row.resize(width, 0.0);
    return g;
}

}  // namespace

std::string ExperimentConfig::canonical() const {
    // the experiment identity: everything that can change a computed number;
    // outdir, formats and jobs only affect where/which files are written
    json j;
    j["eps"] = eps_values;
    j["delta"] = delta_values;
    j["direction"]["P"] = grid_to_json(P);
    j["direction"]["Q"] = grid_to_json(Q);
    j["tolerances"]["ode"] = ode_tol;
    j["tolerances"]["cycle"] = cycle_tol;
    j["tolerances"]["chord"] = chord_tol;
    j["r_max"] = r_max;
    j["xi_offset"] = xi_offset;
    j["grid_n"] = grid_n;
    return j.dump();
}

std::uint64_t ExperimentConfig::hash() const {
    const std::string s = canonical();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string ExperimentConfig::hash_hex() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("eps")) cfg.eps_values = j["eps"].get<std::vector<double>>();
        if (j.contains("delta")) cfg.delta_values = j["delta"].get<std::vector<double>>();
        if (j.contains("direction")) {
            const auto& d = j["direction"];
            if (d.contains("P")) cfg.P = grid_from_json(d["P"], "P");
            if (d.contains("Q")) cfg.Q = grid_from_json(d["Q"], "Q");
        }
        if (j.contains("tolerances")) {
            const auto& t = j["tolerances"];
            if (t.contains("ode")) cfg.ode_tol = t["ode"].get<double>();
            if (t.contains("cycle")) cfg.cycle_tol = t["cycle"].get<double>();
            if (t.contains("chord")) cfg.chord_tol = t["chord"].get<double>();
        }
        if (j.contains("r_max")) cfg.r_max = j["r_max"].get<double>();
        if (j.contains("xi_offset")) cfg.xi_offset = j["xi_offset"].get<double>();
        if (j.contains("grid_n")) cfg.grid_n = j["grid_n"].get<std::size_t>();
        if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
        if (j.contains("outdir")) cfg.outdir = j["outdir"].get<std::string>();
        if (j.contains("formats")) cfg.formats = j["formats"].get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }

    if (cfg.eps_values.empty()) throw ConfigError("eps: need at least one value");
    for (double e : cfg.eps_values)
        if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps: values must be positive");
    for (double d : cfg.delta_values)
        if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("delta: values must be >= 0");
    if (!(cfg.ode_tol > 0.0 && cfg.cycle_tol > 0.0 && cfg.chord_tol > 0.0))
        throw ConfigError("tolerances: must be positive");
    if (!(cfg.r_max > 1.0)) throw ConfigError("r_max: must exceed 1");
    if (!(cfg.xi_offset > 0.0)) throw ConfigError("xi_offset: must be positive");
    if (cfg.grid_n < 8) throw ConfigError("grid_n: must be at least 8");
    if (cfg.jobs < 1) throw ConfigError("jobs: must be >= 1");
    if (cfg.outdir.empty()) throw ConfigError("outdir: must be nonempty");
    for (const auto& f : cfg.formats)
        if (f != "csv" && f != "svg" && f != "json")
            throw ConfigError("formats: unknown format '" + f + "'");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

}  // namespace darboux
