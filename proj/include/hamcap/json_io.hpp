#pragma once

#include <string>

#include "hamcap/capacity.hpp"
#include "hamcap/chart.hpp"
#include "hamcap/hamiltonian.hpp"
#include "hamcap/orbits.hpp"

// vendored single-header json
#include "json.hpp"

namespace hamcap {

using json = nlohmann::json;

json chart_to_json(const Chart& chart);
Chart chart_from_json(const json& j);

// Preset schema: {"kind": "g"|"f"|"sum"|"product_with_cos"|"gk"|
// "counterexample_annulus"|"counterexample_lagrangian", ...}.
// Parameters round-trip bit-exactly through dump/parse.
HamiltonianPtr hamiltonian_from_json(const json& j);

// Canonicalized echo of a preset (defaults filled in), for round-trip
// checks and run manifests.
json preset_echo(const json& j);

struct RunConfig {
    Chart chart = Chart::annulus(1.0);
    json hamiltonian;            // preset object
    HomotopyClass cls;
    int grid = 64;
    int grid_p = 0;              // 0: same as grid
    int steps = 2048;
    double tol = 1e-9;
    int threads = 0;             // 0: library default
    unsigned seed = 0;
    std::string out = "out";
    std::string preset;          // named preset for cmd_profiles
    // squeezing block (optional): r, R, tau
    bool has_squeeze = false;
    int r = 1;
    double R = 0.6;
    double tau = -1.0;
    // capacity block (optional)
    bool has_capacity = false;
    std::string family = "annulus";
    double c_lo = 0.0, c_hi = 0.0, c_tol = 0.008;
    Vec w;                       // lagrangian family offset
};

RunConfig config_from_json(const json& j);
RunConfig load_config(const std::string& path);

json orbits_to_json(const OrbitSearchResult& res, const Chart& chart,
                    int max_samples = 256);
std::string orbits_to_csv(const OrbitSearchResult& res, const Chart& chart);

json capacity_to_json(const CapacityEstimate& est, const Chart& chart);

std::string trajectory_to_csv(const Trajectory& traj, const Hamiltonian& H);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace hamcap
