#include "hamcap/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "hamcap/presets.hpp"
#include "hamcap/profile.hpp"

namespace hamcap {

namespace {

bool probe_empty(const HamiltonianFamily& fam, const HomotopyClass& alpha,
                 double c, const OrbitSearchOptions& search, ProbeLog& log) {
    OrbitSearchOptions opt = search;
    opt.early_exit = true;
    opt.refine = false;
    if (fam.seed_p_lo < fam.seed_p_hi) {
        opt.p_lo = fam.seed_p_lo;
        opt.p_hi = fam.seed_p_hi;
    }
    OrbitSearchResult r = find_orbits(fam.builder(c), fam.chart, alpha, opt);
    log.c = c;
    log.found = r.any_found;
    log.seeds = r.seeds;
    log.analytic_certificate =
        !r.any_found && fam.analytic_empty && fam.analytic_empty(c, alpha);
    return !r.any_found;
}

OrbitSearchResult full_search(const HamiltonianFamily& fam,
                              const HomotopyClass& alpha, double c,
                              const OrbitSearchOptions& search) {
    OrbitSearchOptions opt = search;
    opt.early_exit = false;
    if (fam.seed_p_lo < fam.seed_p_hi) {
        opt.p_lo = fam.seed_p_lo;
        opt.p_hi = fam.seed_p_hi;
    }
    return find_orbits(fam.builder(c), fam.chart, alpha, opt);
}

}  // namespace

CapacityEstimate estimate_capacity(const HamiltonianFamily& fam,
                                   const HomotopyClass& alpha, double c_lo,
                                   double c_hi, double tol,
                                   const OrbitSearchOptions& search) {
    if (!(c_lo <= c_hi)) throw BracketInvalid("bracket needs c_lo <= c_hi");
    if (!(tol > 0)) throw BracketInvalid("tolerance must be positive");

    CapacityEstimate est;
    est.tol = tol;
    est.grid_q = search.grid_q;
    est.grid_p = search.grid_p;

    if (c_lo == c_hi) {
        ProbeLog log;
        bool empty = probe_empty(fam, alpha, c_hi, search, log);
        est.log.push_back(log);
        if (empty)
            throw BracketInvalid("degenerate bracket has no witness orbit");
        est.lower = est.upper = c_hi;
        OrbitSearchResult w = full_search(fam, alpha, c_hi, search);
        est.witnesses = std::move(w.orbits);
        return est;
    }

    ProbeLog log_lo, log_hi;
    if (!probe_empty(fam, alpha, c_lo, search, log_lo))
        throw BracketInvalid("orbit found at c_lo; lower bracket invalid");
    est.log.push_back(log_lo);
    if (probe_empty(fam, alpha, c_hi, search, log_hi))
        throw BracketInvalid("no orbit found at c_hi; upper bracket invalid");
    est.log.push_back(log_hi);

    double lo = c_lo, hi = c_hi;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        ProbeLog log;
        bool empty = probe_empty(fam, alpha, mid, search, log);
        est.log.push_back(log);
        if (empty) lo = mid;
        else hi = mid;
    }
    est.lower = lo;
    est.upper = hi;

    OrbitSearchResult w = full_search(fam, alpha, hi, search);
    est.witnesses = std::move(w.orbits);
    return est;
}

CapacityEstimate bps_capacity(const HamiltonianFamily& fam,
                              const HomotopyClass& alpha, double c_lo,
                              double c_hi, double tol,
                              const OrbitSearchOptions& search) {
    if (alpha.is_zero())
        throw ConfigError("BPS capacity needs a nontrivial class");
    return estimate_capacity(fam, alpha, c_lo, c_hi, tol, search);
}

namespace {

// smooth left cutoff shared by the annulus families
SmoothProfile annulus_family_profile(double R, double tau) {
    SmoothProfile ramp =
        ramp_from_plateau(-tau / 4, R + tau / 4, tau / 4, 1.0 / R);
    SmoothProfile rise = smoothstep_rise(-0.9 * tau, -0.65 * tau);
    return profile_product(rise, ramp);
}

}  // namespace

HamiltonianFamily annulus_capacity_family(double R, double tau) {
    if (tau <= 0) tau = R / 4;
    SmoothProfile lam = annulus_family_profile(R, tau);
    const double drop = lam.value(0.0) - lam.value(R);
    if (std::abs(drop - 1.0) > 1e-12)
        throw Error("annulus family normalization is off");

    HamiltonianFamily fam;
    fam.name = "annulus-ramp";
    fam.chart = Chart::annulus(1.0);
    fam.seed_p_lo = -0.9 * tau;
    fam.seed_p_hi = R + 0.75 * tau;
    fam.builder = [lam, R, tau](double c) {
        SmoothProfile scaled{
            [lam, c](double p) { return c * lam.value(p); },
            [lam, c](double p) { return c * lam.d1(p); },
            [lam, c](double p) { return c * lam.d2(p); }};
        return profile_hamiltonian(scaled, 1, 0, 0.0, false, -0.9 * tau,
                                   R + 0.75 * tau);
    };
    fam.gap = [](double c) { return c; };
    // min slope is exactly -c/R, so no level reaches slope -r below c = rR
    fam.analytic_empty = [R](double c, const HomotopyClass& alpha) {
        int r = -alpha.winding[0];
        return r > 0 && c < r * R;
    };
    return fam;
}

HamiltonianFamily annulus_bps_family(double R, double x_width, double tau) {
    if (tau <= 0) tau = R / 4;
    SmoothProfile lam = annulus_family_profile(R, tau);
    // normalize by the infimum over X = {p in [0, x_width]}
    const double infX = lam.value(x_width);

    HamiltonianFamily fam;
    fam.name = "annulus-bps";
    fam.chart = Chart::annulus(1.0);
    fam.seed_p_lo = -0.9 * tau;
    fam.seed_p_hi = R + 0.75 * tau;
    fam.builder = [lam, R, tau, infX](double c) {
        double s = c / infX;
        SmoothProfile scaled{
            [lam, s](double p) { return s * lam.value(p); },
            [lam, s](double p) { return s * lam.d1(p); },
            [lam, s](double p) { return s * lam.d2(p); }};
        return profile_hamiltonian(scaled, 1, 0, 0.0, false, -0.9 * tau,
                                   R + 0.75 * tau);
    };
    fam.gap = [](double c) { return c; };
    fam.analytic_empty = [R, infX](double c, const HomotopyClass& alpha) {
        int r = -alpha.winding[0];
        return r > 0 && c / infX < r * R;
    };
    return fam;
}

HamiltonianFamily lagrangian_capacity_family(int n, const Vec& w,
                                             const HomotopyClass& alpha) {
    // validate the construction once (fixes beta or throws NoValidBeta)
    counterexample_lagrangian(n, w, 1, alpha);

    HamiltonianFamily fam;
    fam.name = "lagrangian-tori";
    fam.chart = Chart::product_torus(n);
    fam.builder = [n, w, alpha](double c) {
        int k = std::max(1, static_cast<int>(std::ceil(c)));
        LagrangianCounterexample ce = counterexample_lagrangian(n, w, k, alpha);
        if (k == c) return ce.hamiltonian;
        return scaled_hamiltonian(ce.hamiltonian, c / k);  // gap exactly c
    };
    fam.gap = [](double c) { return c; };
    // direction argument: every nonconstant orbit moves along beta
    fam.analytic_empty = [](double, const HomotopyClass&) { return true; };
    return fam;
}

RotationVector rotation_vector(const PeriodicOrbit& orbit, const Chart& chart) {
    const PhasePoint& a = orbit.trajectory.front();
    const PhasePoint& b = orbit.trajectory.back();
    const int n = chart.pairs;
    RotationVector rv;
    rv.components.resize(chart.winding_size());
    for (int i = 0; i < n; ++i) rv.components[i] = b.q[i] - a.q[i];
    if (chart.p_periodic())
        for (int i = 0; i < n; ++i) rv.components[n + i] = b.p[i] - a.p[i];
    return rv;
}

RotationVector rotation_vector(const HamiltonianPtr& H, const Chart& chart,
                               const PhasePoint& x0, double T,
                               int steps_per_unit) {
    FlowOptions fo;
    fo.t_end = T;
    fo.steps = static_cast<int>(std::lround(steps_per_unit * T));
    fo.store_trajectory = false;
    FlowResult fr = flow(*H, chart, x0, fo);
    const int n = chart.pairs;
    RotationVector rv;
    rv.components.resize(chart.winding_size());
    for (int i = 0; i < n; ++i)
        rv.components[i] = (fr.end.q[i] - x0.q[i]) / T;
    if (chart.p_periodic())
        for (int i = 0; i < n; ++i)
            rv.components[n + i] = (fr.end.p[i] - x0.p[i]) / T;
    return rv;
}

CpReport cp_comparison(const HamiltonianFamily& fam,
                       const HomotopyClass& alpha,
                       const CapacityEstimate& est,
                       const OrbitSearchOptions& search) {
    CpReport rep;
    Vec l = alpha.winding.cast<double>();
    double l_alpha = l.squaredNorm();

    // witnesses at upper, plus full searches at up to three more sampled
    // gaps above the estimate
    std::vector<std::pair<double, std::vector<PeriodicOrbit>>> sets;
    sets.emplace_back(est.upper, est.witnesses);
    std::vector<double> cs;
    for (const auto& lg : est.log)
        if (lg.found && lg.c > est.upper) cs.push_back(lg.c);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    if (cs.size() > 3) cs.resize(3);
    for (double c : cs) {
        OrbitSearchResult r = full_search(fam, alpha, c, search);
        sets.emplace_back(c, std::move(r.orbits));
    }

    bool any = false;
    for (auto& [c, orbits] : sets) {
        for (size_t i = 0; i < orbits.size(); ++i) {
            any = true;
            CpPairing e;
            e.c = c;
            e.orbit = static_cast<int>(i);
            e.rho = rotation_vector(orbits[i], fam.chart).components;
            e.pairing = l.dot(e.rho);
            e.l_alpha = l_alpha;
            e.ok = std::abs(e.pairing) >= l_alpha - 1e-9;
            rep.all_ok = rep.all_ok && e.ok;
            rep.entries.push_back(std::move(e));
        }
    }
    rep.vacuous = !any;
    return rep;
}

PartialSupportCheck problem52_check(int n, double R,
                                    const HomotopyClass& alpha,
                                    double gap_value,
                                    const OrbitSearchOptions& search) {
    Vec aq = alpha.winding.head(n).cast<double>();
    const double anorm = aq.norm();
    PartialSupportCheck out;
    out.alpha_norm_R = anorm * R;

    // radial plateau-ramp: value gap_value at p = 0, 0 at |p| = R
    const double corner = R / 8;
    SmoothProfile ramp =
        ramp_from_plateau(corner, R - corner, corner, 1.0 / (R - corner));
    double top = ramp.value(0.0);
    SmoothProfile scaled{
        [ramp, top, gap_value](double x) {
            return gap_value / top * ramp.value(x);
        },
        [ramp, top, gap_value](double x) {
            return gap_value / top * ramp.d1(x);
        },
        [ramp, top, gap_value](double x) {
            return gap_value / top * ramp.d2(x);
        }};
    HamiltonianPtr H = radial_profile_hamiltonian(scaled, n, R);

    out.gap = gap_value;
    out.sup_H = gap_value;
    out.hypotheses_ok =
        out.gap > out.alpha_norm_R && out.sup_H < out.alpha_norm_R + out.gap;

    OrbitSearchResult r =
        find_orbits(H, Chart::product_torus(n), alpha, search);
    out.orbit_found = r.any_found;
    out.orbit_count = static_cast<long>(r.orbits.size());
    return out;
}

}  // namespace hamcap
