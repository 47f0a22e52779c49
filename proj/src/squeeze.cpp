#include "hamcap/squeeze.hpp"

#include <algorithm>
#include <cmath>

namespace hamcap {

namespace {

// band extrema: q over [0,1], p over [lo,hi], 512 points per axis
double band_inf(const Hamiltonian& H, double lo, double hi) {
    Vec q0 = Vec::Zero(1), q1 = Vec::Ones(1);
    Vec p0 = Vec::Constant(1, lo), p1 = Vec::Constant(1, hi);
    return grid_inf(H, q0, q1, p0, p1, 512);
}

double band_sup(const Hamiltonian& H, double lo, double hi) {
    Vec q0 = Vec::Zero(1), q1 = Vec::Ones(1);
    Vec p0 = Vec::Constant(1, lo), p1 = Vec::Constant(1, hi);
    return grid_sup(H, q0, q1, p0, p1, 512);
}

double golden_pick(double lo, double hi, const std::vector<double>& avoid,
                   unsigned seed) {
    const double width = hi - lo;
    const double phi = 0.6180339887498949;
    const double margin = 1e-6;
    for (unsigned j = 0; j < 4096; ++j) {
        // midpoint first, then golden-ratio nudges kept strictly interior
        double frac = j == 0 ? 0.5 : std::fmod(0.5 + (seed + j) * phi, 1.0);
        frac = 0.05 + 0.9 * frac;
        double x = lo + width * frac;
        bool ok = true;
        for (double v : avoid)
            if (std::abs(x - v) < margin) ok = false;
        if (ok) return x;
    }
    throw Error("could not place a window constant away from the spectrum");
}

}  // namespace

std::pair<double, double> solve_slope_equation(const SmoothProfile& h, int r,
                                               double eps1) {
    auto g = [&](double s) { return h.d1(s) + r; };
    const int N = 2048;
    std::vector<double> roots;
    double prev_s = eps1 * 1e-9;
    double prev = g(prev_s);
    for (int i = 1; i <= N && roots.size() < 2; ++i) {
        double s = eps1 * i / (N + 1);
        double cur = g(s);
        if (prev == 0.0) roots.push_back(prev_s);
        else if (prev * cur < 0) {
            double a = prev_s, b = s, fa = prev;
            for (int it = 0; it < 200; ++it) {
                double m = 0.5 * (a + b);
                double fm = g(m);
                if (fm == 0.0) { a = b = m; break; }
                if (fa * fm < 0) b = m;
                else { a = m; fa = fm; }
            }
            double root = 0.5 * (a + b);
            // Newton polish
            for (int it = 0; it < 8; ++it) {
                double d = h.d2(root);
                if (d == 0.0) break;
                double step = -g(root) / d;
                double cand = root + step;
                if (cand <= 0 || cand >= eps1) break;
                root = cand;
            }
            roots.push_back(root);
        }
        prev = cur;
        prev_s = s;
    }
    if (roots.size() < 2)
        throw NoRoot("slope -r is not attained twice on (0, eps1)");
    double s0 = roots[0], s1 = roots[1];
    if (std::abs(h.d1(s0) + r) > 1e-10 || std::abs(h.d1(s1) + r) > 1e-10)
        throw NoRoot("slope equation residual above tolerance");
    return {s0, s1};
}

SqueezingPair build_squeezing_pair(const HamiltonianPtr& H, const Chart& chart,
                                   int r, double R, double tau,
                                   const std::vector<double>& extra_avoid,
                                   unsigned seed) {
    if (chart.pairs != 1)
        throw ConfigError("squeezing pair needs a one-pair chart");
    if (r < 1) throw ConfigError("r must be a positive integer");
    if (tau <= 0) tau = R / 4;
    const double C = r * R;

    // gap hypothesis at the loops themselves
    const double inf_X = band_inf(*H, 0.0, 0.0);
    const double sup_Y = band_sup(*H, R, R);
    if (!(inf_X - sup_Y > C))
        throw ThresholdNotMet("inf_X H - sup_Y H must exceed rR");

    // largest dyadic eps1 <= tau/2 with the widened-band gap
    double eps1 = -1, m_X = 0, S_Y = 0;
    for (double e = tau / 2; e > tau * std::pow(2.0, -40); e /= 2) {
        double mx = band_inf(*H, -e, e);
        double sy = band_sup(*H, R - e, R + e);
        if (mx - sy > C) {
            eps1 = e;
            m_X = mx;
            S_Y = sy;
            break;
        }
    }
    if (eps1 < 0) throw NoEpsilon("no dyadic eps1 <= tau/2 satisfies the gap");

    // global extrema; compactly supported fields attain 0 off their support
    SupportBox sb = H->support();
    double box_lo = std::min(sb.p_lo[0], chart.flow_p_min());
    double box_hi = std::max(sb.p_hi[0], chart.flow_p_max());
    if (!std::isfinite(box_lo)) box_lo = sb.p_lo[0] - 1.0;
    if (!std::isfinite(box_hi)) box_hi = sb.p_hi[0] + 1.0;
    double supH = band_sup(*H, box_lo, box_hi);
    double infH = band_inf(*H, box_lo, box_hi);
    if (chart.kind == ChartKind::Annulus || chart.kind == ChartKind::Strip) {
        supH = std::max(supH, 0.0);
        infH = std::min(infH, 0.0);
    }

    WindowConstants wc;
    wc.r = r;
    wc.R = R;
    wc.tau = tau;
    wc.C = C;
    wc.eps1 = eps1;
    wc.m_X = m_X;
    wc.S_Y = S_Y;
    // delta computed once so S1-m1 == S0-m0 holds bit-exactly
    const double delta = std::max(m_X - infH, supH - S_Y);
    wc.m0 = S_Y;
    wc.S0 = S_Y + delta;
    wc.S1 = m_X;
    wc.m1 = m_X - delta;
    wc.S_H = std::max(std::abs(supH), std::abs(infH));
    wc.m_H = -wc.S_H;
    wc.c_H = -3 * wc.S_H + 3 * wc.m_H - 1;
    wc.c_H_prime = -3 * wc.m_H + C + 3 * wc.S_H + 1;

    SqueezingPair sp;
    sp.h0 = f_profile(wc.m0, wc.S0, eps1);
    sp.h1 = g_profile(wc.m1, wc.S1, eps1);
    sp.H0 = profile_hamiltonian(sp.h0, 1, 0, R, false, -R - 2 * eps1, 2 * eps1);
    sp.H1 = profile_hamiltonian(sp.h1, 1, 0, 0.0, false, -2 * eps1,
                                R + 2 * eps1);

    auto roots = solve_slope_equation(sp.h1, r, eps1);
    wc.s0 = roots.first;
    wc.s1 = roots.second;

    // H1 <= H <= H0 over the widened zone
    {
        const int N = 200;
        for (int iq = 0; iq < N; ++iq)
            for (int ip = 0; ip < N; ++ip) {
                PhasePoint x = PhasePoint::make1(
                    static_cast<double>(iq) / (N - 1),
                    -tau + (R + 2 * tau) * ip / (N - 1));
                double v = H->value(0.0, x);
                if (sp.H1->value(0.0, x) > v + 1e-12 ||
                    sp.H0->value(0.0, x) < v - 1e-12)
                    throw ThresholdNotMet("H0 >= H >= H1 fails on the grid");
            }
    }

    // windows for a, b, c avoiding the known action values
    std::vector<double> avoid = extra_avoid;
    avoid.push_back(sp.h0.value(-wc.s0) + r * (R - wc.s0));
    avoid.push_back(sp.h0.value(-wc.s1) + r * (R - wc.s1));
    avoid.push_back(sp.h1.value(wc.s0) + r * wc.s0);
    avoid.push_back(sp.h1.value(wc.s1) + r * wc.s1);
    wc.a = golden_pick(wc.m1 - 1, wc.m1, avoid, seed);
    wc.b = golden_pick(C + wc.m0, wc.S1, avoid, seed);
    wc.c = golden_pick(C + wc.S0, C + wc.S0 + 1, avoid, seed);

    sp.wc = wc;
    return sp;
}

std::vector<PredictedOrbit> predicted_squeezing_orbits(
    const SqueezingPair& sp) {
    const WindowConstants& w = sp.wc;
    std::vector<PredictedOrbit> out;
    // H0 orbits at p = R - s^i; tangent intercept h0(-s^i) + r(R - s^i)
    out.push_back({0, 0, w.R - w.s0,
                   sp.h0.value(-w.s0) + w.r * (w.R - w.s0), w.a, w.b});
    out.push_back({0, 1, w.R - w.s1,
                   sp.h0.value(-w.s1) + w.r * (w.R - w.s1), w.b, w.c});
    // H1 orbits at p = s^i; the s1 family sits in the lower window
    out.push_back({1, 1, w.s1, sp.h1.value(w.s1) + w.r * w.s1, w.a, w.b});
    out.push_back({1, 0, w.s0, sp.h1.value(w.s0) + w.r * w.s0, w.b, w.c});
    return out;
}

HamiltonianPtr monotone_homotopy(const SqueezingPair& sp, double sigma) {
    if (sigma < 0 || sigma > 1)
        throw ConfigError("homotopy parameter must lie in [0,1]");
    const WindowConstants w = sp.wc;
    const SmoothProfile h0 = sp.h0;
    const SmoothProfile h1 = sp.h1;
    const double l = (w.R - w.eps1) / 2;
    const double R = w.R;

    auto well = [h0, R, l](double s, double p, int deriv) {
        // h0((|p - R + s l| - s l)^+); corners land where h0 is flat
        double v = p - R + s * l;
        double u = std::abs(v) - s * l;
        if (u <= 0) {
            return deriv == 0 ? h0.value(0.0) : 0.0;
        }
        double sgn = v > 0 ? 1.0 : -1.0;
        if (deriv == 0) return h0.value(u);
        if (deriv == 1) return h0.d1(u) * sgn;
        return h0.d2(u);
    };

    SmoothProfile prof;
    if (sigma <= 0.5) {
        double s = 2 * sigma;
        prof = {[=](double p) { return well(s, p, 0); },
                [=](double p) { return well(s, p, 1); },
                [=](double p) { return well(s, p, 2); }};
    } else {
        double s = 2 * sigma - 1;
        prof = {[=](double p) {
                    return (1 - s) * well(1.0, p, 0) + s * h1.value(p);
                },
                [=](double p) {
                    return (1 - s) * well(1.0, p, 1) + s * h1.d1(p);
                },
                [=](double p) {
                    return (1 - s) * well(1.0, p, 2) + s * h1.d2(p);
                }};
    }
    return profile_hamiltonian(prof, 1, 0, 0.0, false, -2 * w.eps1,
                               R + 2 * w.eps1);
}

HomotopyOrbits homotopy_orbit_data(const SqueezingPair& sp, double sigma) {
    const WindowConstants& w = sp.wc;
    const double l = (w.R - w.eps1) / 2;
    HomotopyOrbits out;
    if (sigma <= 0.5) {
        double s = 2 * sigma;
        out.p_lower = w.R - 2 * s * l - w.s0;
        out.action_lower = sp.h0.value(w.s0) + w.r * out.p_lower;
        out.p_upper = w.R - 2 * s * l - w.s1;
        out.action_upper = sp.h0.value(w.s1) + w.r * out.p_upper;
    } else {
        double s = 2 * sigma - 1;
        double delta = w.S1 - w.m1;
        // interpolated plateau value (1-s) m0 + s m1 on the descending side
        out.p_lower = w.s1;
        out.action_lower = delta * mu(w.s1 / w.eps1) + (1 - s) * w.m0 +
                           s * w.m1 + w.r * w.s1;
        out.p_upper = w.s0;
        out.action_upper = delta * mu(w.s0 / w.eps1) + (1 - s) * w.m0 +
                           s * w.m1 + w.r * w.s0;
    }
    return out;
}

std::vector<double> qindep_action_spectrum(const Hamiltonian& H, int r,
                                           double p_lo, double p_hi,
                                           int scan_points) {
    auto slope = [&](double p) {
        return H.gradient(0.0, PhasePoint::make1(0.0, p)).dp[0] + r;
    };
    std::vector<double> actions;
    double prev_p = p_lo, prev = slope(p_lo);
    for (int i = 1; i <= scan_points; ++i) {
        double p = p_lo + (p_hi - p_lo) * i / scan_points;
        double cur = slope(p);
        if (prev * cur < 0 || prev == 0.0) {
            double a = prev_p, b = p, fa = prev;
            for (int it = 0; it < 100; ++it) {
                double m = 0.5 * (a + b);
                double fm = slope(m);
                if (fa * fm <= 0) b = m;
                else { a = m; fa = fm; }
            }
            double root = 0.5 * (a + b);
            actions.push_back(
                H.value(0.0, PhasePoint::make1(0.0, root)) + r * root);
        }
        prev = cur;
        prev_p = p;
    }
    std::sort(actions.begin(), actions.end());
    return actions;
}

}  // namespace hamcap
