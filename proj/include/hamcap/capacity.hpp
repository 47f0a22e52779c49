#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hamcap/chart.hpp"
#include "hamcap/hamiltonian.hpp"
#include "hamcap/orbits.hpp"

namespace hamcap {

// One-parameter family H_c with certified gap inf_X H - sup_Y H = gap(c),
// strictly increasing in c (gap(c) = c for the built-in families).
struct HamiltonianFamily {
    std::function<HamiltonianPtr(double)> builder;
    std::function<double(double)> gap;
    Chart chart;
    double seed_p_lo = 0.0, seed_p_hi = 0.0;
    std::string name;
    // closed-form no-orbit certificate (slope / direction argument on the
    // preset parameters); empty when unavailable
    std::function<bool(double, const HomotopyClass&)> analytic_empty;
};

struct ProbeLog {
    double c = 0.0;
    bool found = false;
    bool analytic_certificate = false;
    long seeds = 0;
};

struct CapacityEstimate {
    double lower = 0.0;   // largest sampled c with a no-orbit certificate
    double upper = 0.0;   // smallest sampled c with a witness orbit
    double tol = 0.0;
    std::vector<PeriodicOrbit> witnesses;  // full search at upper
    std::vector<ProbeLog> log;
    long grid_q = 0, grid_p = 0;
};

// Bisection on c; emptiness decided empirically by find_orbits at the given
// density (probe runs stop at the first witness).  Pre: no orbit at c_lo
// and a witness at c_hi, else BracketInvalid.
CapacityEstimate estimate_capacity(const HamiltonianFamily& fam,
                                   const HomotopyClass& alpha, double c_lo,
                                   double c_hi, double tol,
                                   const OrbitSearchOptions& search = {});

// BPS specialization (Y empty, gap = inf_X H).  Rejects the zero class.
CapacityEstimate bps_capacity(const HamiltonianFamily& fam,
                              const HomotopyClass& alpha, double c_lo,
                              double c_hi, double tol,
                              const OrbitSearchOptions& search = {});

// The annulus verification family: H_c = c * lambda(p) with lambda' equal
// to -1/R exactly on [-tau/4, R+tau/4] and quintic shoulders, cut off
// smoothly on the left.  gap(c) = c and the orbit threshold is rR.
HamiltonianFamily annulus_capacity_family(double R, double tau = -1.0);

// Same shape normalized by inf over X = {p in [0, x_width]} (BPS variant;
// enlarging X can only lower the estimate).
HamiltonianFamily annulus_bps_family(double R, double x_width = 0.0,
                                     double tau = -1.0);

// Lagrangian-torus family (Prop 5.1 shape): gap(c) = c, no orbit in class
// alpha at any c (analytic direction certificate).
HamiltonianFamily lagrangian_capacity_family(int n, const Vec& w,
                                             const HomotopyClass& alpha);

// Pairing of closed 1-forms with the flow average.  Components follow the
// winding layout of the chart.
struct RotationVector {
    Vec components;
};

// Exact per-period displacement of a closed orbit (equals its class).
RotationVector rotation_vector(const PeriodicOrbit& orbit, const Chart& chart);

// Birkhoff average of a (not necessarily closed) trajectory over [0, T].
RotationVector rotation_vector(const HamiltonianPtr& H, const Chart& chart,
                               const PhasePoint& x0, double T,
                               int steps_per_unit = 2048);

// Checks |<l, rho>| >= l(alpha) with l = alpha for every witness found at
// sampled gaps at or above the estimate.
struct CpPairing {
    double c = 0.0;
    int orbit = -1;
    Vec rho;
    double pairing = 0.0;
    double l_alpha = 0.0;
    bool ok = false;
};
struct CpReport {
    std::vector<CpPairing> entries;
    bool all_ok = true;
    bool vacuous = false;  // no witness exists (Lagrangian family)
};
CpReport cp_comparison(const HamiltonianFamily& fam,
                       const HomotopyClass& alpha,
                       const CapacityEstimate& est,
                       const OrbitSearchOptions& search = {});

// Orbit-existence check under the partial-support hypotheses
// (gap above |alpha| R with sup H below |alpha| R + inf_X H) for the
// sphere-level sets on ProductTorus(n); reports measurements only.
struct PartialSupportCheck {
    double gap = 0.0;
    double sup_H = 0.0;
    double alpha_norm_R = 0.0;
    bool hypotheses_ok = false;
    bool orbit_found = false;
    long orbit_count = 0;
};
PartialSupportCheck problem52_check(int n, double R,
                                    const HomotopyClass& alpha,
                                    double gap_value,
                                    const OrbitSearchOptions& search = {});

}  // namespace hamcap
