#pragma once

#include <string>

#include "hamcap/chart.hpp"
#include "hamcap/hamiltonian.hpp"

namespace hamcap {

// Canonical scenarios shared by the CLI presets, the acceptance suite and
// the tests.
struct SqueezeScenario {
    std::string name;
    Chart chart;
    HamiltonianPtr H;
    int r = 1;
    double R = 0.6;
    double tau = -1.0;
};

// Annulus, H = g_{0,1,0.2}(p), r = 1, R = 0.6.
SqueezeScenario annulus_default_scenario();

// Annulus, H = g_{0,2,0.2}(p), r = 2, R = 0.6.
SqueezeScenario annulus_r2_scenario();

// Torus, H = 0.5 mu(d(p,0)/0.2); loops at p = 0 and p = 0.3 (area 0.3).
HamiltonianPtr torus_base_hamiltonian();

// Torus base plus 0.01 (1 - cos 2 pi q) bump(p): breaks each orbit circle
// into two nondegenerate orbits.
HamiltonianPtr torus_perturbed_hamiltonian();

// H scaled by a constant factor (used by the T-periodic rescaling checks).
HamiltonianPtr scaled_hamiltonian(HamiltonianPtr H, double factor);

inline constexpr double kTorusR = 0.3;
inline constexpr double kTorusTau = 0.075;

}  // namespace hamcap
