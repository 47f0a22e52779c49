#pragma once

#include <optional>
#include <vector>

#include "hamcap/chart.hpp"
#include "hamcap/dynamics.hpp"
#include "hamcap/hamiltonian.hpp"
#include "hamcap/squeeze.hpp"

namespace hamcap {

// A 1-periodic solution in the prescribed class.
struct PeriodicOrbit {
    Trajectory trajectory;   // one period, start at the canonical rep
    HomotopyClass cls;
    double action = 0.0;     // w.r.t. the reference loop at p = 0
    Monodromy mono;
    bool nondegenerate = false;
    int family_id = -1;      // >= 0 when the orbit represents a family
    double residual = 0.0;   // closure residual |phi^1(x) - x - alpha|
};

// Converged shooting solution before dedupe.
struct Candidate {
    PhasePoint z0;       // canonical representative of the initial point
    double residual = 0.0;
    Mat monodromy;
};

// Morse-Bott family: a connected set of solutions at one p-level.
struct OrbitFamily {
    std::vector<PhasePoint> members;  // canonical initial conditions
    int representative = -1;          // index into the orbit list
    double p_level = 0.0;
};

struct DedupeOutcome {
    std::vector<Candidate> isolated;
    std::vector<std::vector<Candidate>> families;
};

// Groups converged candidates into isolated orbits and families.  Families
// require degenerate monodromy (eigenvalue 1) with the eigendirection
// tangent to the solution set; throws AmbiguousCluster when a cluster is
// neither point-like nor curve-like at the given radius.
DedupeOutcome dedupe(const Chart& chart, std::vector<Candidate> candidates,
                     double radius, double nondeg_tol = 1e-8);

struct OrbitSearchOptions {
    int grid_q = 64;          // seeds per q axis
    int grid_p = 64;          // seeds per p axis
    int steps = 2048;
    double tol = 1e-9;        // closure residual
    int newton_max = 25;
    double dedupe_radius = 1e-5;
    double nondeg_tol = 1e-8;
    bool parallel = true;
    bool early_exit = false;  // emptiness probe: stop at first orbit
    bool refine = true;       // re-verify representatives at doubled steps
    unsigned seed = 0;        // deterministic seed-grid jitter
    double p_lo = 0.0, p_hi = 0.0;  // seed box override when p_lo < p_hi
};

struct OrbitSearchResult {
    std::vector<PeriodicOrbit> orbits;  // deduplicated, sorted by (p, q)
    std::vector<OrbitFamily> families;
    bool any_found = false;
    bool complete = true;    // false when early_exit cut the search short
    long seeds = 0;
    long converged = 0;
};

// Newton shooting on F(x) = phi^1(x) - x - alpha from every grid seed.
// Empty result is meaningful (reported at the used density).
OrbitSearchResult find_orbits(const HamiltonianPtr& H, const Chart& chart,
                              const HomotopyClass& alpha,
                              const OrbitSearchOptions& opt = {});

// Serial reference implementation of the same search (identical output).
OrbitSearchResult find_orbits_serial(const HamiltonianPtr& H,
                                     const Chart& chart,
                                     const HomotopyClass& alpha,
                                     OrbitSearchOptions opt = {});

// Action with respect to the reference loop z:
// integral of H along the orbit minus the swept area
// (loop p dq of the orbit minus loop p dq of z).
double action(const Hamiltonian& H, const PeriodicOrbit& orbit,
              const LiftedLoop& z, const Chart& chart);

// Trapezoid line integral of p dq along a sampled loop.
double loop_p_dq(const std::vector<PhasePoint>& points);

// Sorted action values with entries within merge_radius coalesced.
struct ActionSpectrum {
    std::vector<std::pair<double, int>> entries;  // (action, orbit index)
};
ActionSpectrum action_spectrum(const std::vector<PeriodicOrbit>& orbits,
                               double merge_radius = 1e-8);

// Asserts each squeezing-pair orbit action lies in its predicted window.
struct WindowCheck {
    int orbit = -1;
    double p_level = 0.0;
    double action = 0.0;
    double lo = 0.0, hi = 0.0;
    bool ok = false;
};
struct WindowReport {
    std::vector<WindowCheck> checks;
    bool all_ok = true;
};
WindowReport verify_window(const std::vector<PeriodicOrbit>& orbits,
                           const SqueezingPair& sp);

// T_l on the covering strip: shifts p by sign*l.  The orbit must lie
// entirely in the half strip {sign * p > 0} (NotInHalfStrip otherwise).
PeriodicOrbit translate_orbit(const PeriodicOrbit& x, int l, int sign);

// osc(p) <= sup |dH/dq| + 1e-6, the torus Hamiltonian's bound estimated on
// a 256x256 grid.
bool osc_check(const PeriodicOrbit& x, const Hamiltonian& torus_H);
double osc_p(const PeriodicOrbit& x);
double sup_dHdq(const Hamiltonian& torus_H);

// Projects a G^k orbit with action in (m1 - 1, C + S0 + 1) back to the
// torus and re-verifies it solves H there.  Throws EscapesWindow when the
// orbit reaches {|p| >= k}.
PeriodicOrbit project_orbit(const PeriodicOrbit& x, const WindowConstants& wc,
                            int k, const HamiltonianPtr& torus_H,
                            double tol = 1e-9);

// T-periodic rescaling check: flows the start of an orbit of T*H under H
// for time T and reports the closure residual against the class.
double rescaling_residual(const HamiltonianPtr& H, const Chart& chart,
                          const PeriodicOrbit& orbit_of_TH, int T, int steps);

}  // namespace hamcap
