#pragma once

#include <utility>
#include <vector>

#include "hamcap/chart.hpp"
#include "hamcap/hamiltonian.hpp"
#include "hamcap/profile.hpp"

namespace hamcap {

// Derived constants of the squeezing construction.  The slope-equation
// roots s0 < s1 solve h1'(s) = -r.
struct WindowConstants {
    double r = 0, R = 0, tau = 0, C = 0;
    double eps1 = 0;
    double m_X = 0, S_Y = 0;
    double m0 = 0, S0 = 0, m1 = 0, S1 = 0;
    double a = 0, b = 0, c = 0;
    double S_H = 0, m_H = 0;       // sup|H| and -sup|H|
    double c_H = 0, c_H_prime = 0;
    double s0 = 0, s1 = 0;
};

struct SqueezingPair {
    HamiltonianPtr H0;
    HamiltonianPtr H1;
    WindowConstants wc;
    SmoothProfile h0;  // H0(q,p) = h0(p - R)
    SmoothProfile h1;  // H1(q,p) = h1(p)
};

// Level and closed-form action of an unperturbed squeezing-pair orbit
// family, with its predicted action window.
struct PredictedOrbit {
    int which;        // 0 -> orbit of H0, 1 -> orbit of H1
    int root;         // 0 -> uses s0, 1 -> uses s1
    double p_level;
    double action;    // tangent-line y-intercept
    double window_lo;
    double window_hi;
};

// Builds H0 >= H >= H1 with their window constants on a one-pair chart.
// X is the loop {p=0}, Y the loop {p=R}; the gap hypothesis
// inf_X H - sup_Y H > rR is required (ThresholdNotMet otherwise), and a
// dyadic eps1 <= tau/2 satisfying the widened-band gap must exist
// (NoEpsilon otherwise).  extra_avoid lists action values a, b, c must keep
// a distance >= 1e-6 from, on top of the four closed-form orbit actions.
SqueezingPair build_squeezing_pair(const HamiltonianPtr& H, const Chart& chart,
                                   int r, double R, double tau = -1.0,
                                   const std::vector<double>& extra_avoid = {},
                                   unsigned seed = 0);

// Roots of h'(s) = -r on (0, eps1); 0 < s0 < s1 < eps1 with residual
// below 1e-10.  Throws NoRoot when the slope never reaches -r.
std::pair<double, double> solve_slope_equation(const SmoothProfile& h, int r,
                                               double eps1);

// The four unperturbed orbit families with closed-form actions and windows.
std::vector<PredictedOrbit> predicted_squeezing_orbits(const SqueezingPair& sp);

// Interpolating Hamiltonian H_sigma for sigma in [0,1]: slides the h0 well
// across the annulus for sigma <= 1/2, then sinks linearly to H1.
// Pointwise nonincreasing in sigma; equals H0 at 0 and H1 at 1.
HamiltonianPtr monotone_homotopy(const SqueezingPair& sp, double sigma);

// Orbit levels and closed-form actions of H_sigma (lower window family
// first), used by the action-tracking sweep.
struct HomotopyOrbits {
    double p_lower, action_lower;  // stays in (a,b)
    double p_upper, action_upper;  // stays in (b,c)
};
HomotopyOrbits homotopy_orbit_data(const SqueezingPair& sp, double sigma);

// Action values of the p-level orbits of a q-independent Hamiltonian in the
// winding -r class: roots of slope(p) = -r over [p_lo, p_hi], action
// H(p) + r p (reference loop at p = 0).
std::vector<double> qindep_action_spectrum(const Hamiltonian& H, int r,
                                           double p_lo, double p_hi,
                                           int scan_points = 4096);

}  // namespace hamcap
