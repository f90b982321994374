#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "darboux/foliation.hpp"

namespace darboux {

/// One experiment description: parameter grids, deformation direction,
/// tolerances, truncation radius, output destination. Schema-validated
/// before any computation; the FNV-1a hash of the canonical serialized form
/// is stamped on every output for provenance.
struct ExperimentConfig {
    std::vector<double> eps_values{0.5};
    std::vector<double> delta_values{};  // empty = delta = 0 baseline
    PolyGrid P = PolyGrid::zero();
    PolyGrid Q = PolyGrid::zero();
    double ode_tol = tol::ode_local;
    double cycle_tol = tol::cycle;
    double chord_tol = tol::chord;
    double r_max = 6.0;
    double xi_offset = 2e-3;
    std::size_t grid_n = 48;
    int jobs = 1;
    std::string outdir = "out";
    std::vector<std::string> formats{"csv", "svg", "json"};

    std::string canonical() const;  // sorted-key JSON dump
    std::uint64_t hash() const;     // FNV-1a 64 of canonical()
    std::string hash_hex() const;
};

/// Parse + validate; throws ConfigError with a machine-readable message.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

}  // namespace darboux
