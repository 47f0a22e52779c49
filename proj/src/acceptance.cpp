#include "hamcap/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hamcap/capacity.hpp"
#include "hamcap/chart.hpp"
#include "hamcap/dynamics.hpp"
#include "hamcap/json_io.hpp"
#include "hamcap/orbits.hpp"
#include "hamcap/presets.hpp"
#include "hamcap/profile.hpp"
#include "hamcap/squeeze.hpp"

namespace hamcap {

namespace {

std::string fmt(double v, const char* spec = "%.3g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

struct Ctx {
    std::vector<CapacityEstimate> estimates;  // r = 1, 2, 3 from criterion 1
    HamiltonianFamily family = annulus_capacity_family(0.6);
};

using CheckFn = std::function<bool(Ctx&, std::string&)>;

CriterionResult run_one(int id, const std::string& name, Ctx& ctx,
                        const CheckFn& fn) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        r.pass = fn(ctx, r.detail);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    return r;
}

OrbitSearchOptions probe_options() {
    OrbitSearchOptions o;
    o.grid_q = 12;
    o.grid_p = 48;
    o.steps = 1024;
    return o;
}

// ---- criterion 1: capacity value rR ------------------------------------
bool check_capacity_value(Ctx& ctx, std::string& detail) {
    const double R = 0.6;
    bool ok = true;
    std::ostringstream os;
    for (int r = 1; r <= 3; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        HomotopyClass alpha = HomotopyClass::single(-r);
        CapacityEstimate est = estimate_capacity(
            ctx.family, alpha, 0.5 * r * R, 1.5 * r * R, 0.008,
            probe_options());
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        double target = r * R;
        bool contains = est.lower <= target && target <= est.upper;
        bool narrow = est.upper - est.lower <= 0.01;
        bool fast = secs <= 60.0;
        ok = ok && contains && narrow && fast && !est.witnesses.empty();
        os << "r=" << r << ": [" << fmt(est.lower, "%.6f") << ", "
           << fmt(est.upper, "%.6f") << "] target " << fmt(target, "%.3f")
           << " in " << fmt(secs, "%.1f") << "s; ";
        ctx.estimates.push_back(std::move(est));
    }
    detail = os.str();
    return ok;
}

// ---- criterion 2: closed-form actions and windows ----------------------
bool check_closed_form_actions(Ctx&, std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    for (const SqueezeScenario& sc :
         {annulus_default_scenario(), annulus_r2_scenario()}) {
        SqueezingPair sp = build_squeezing_pair(sc.H, sc.chart, sc.r, sc.R,
                                                sc.tau);
        std::vector<PredictedOrbit> pred = predicted_squeezing_orbits(sp);
        double max_err = 0;
        for (int which = 0; which < 2; ++which) {
            OrbitSearchOptions opt;
            opt.grid_q = 8;
            opt.grid_p = 48;
            HomotopyClass alpha = HomotopyClass::single(-sc.r);
            const HamiltonianPtr& Hi = which == 0 ? sp.H0 : sp.H1;
            OrbitSearchResult res = find_orbits(Hi, sc.chart, alpha, opt);
            if (res.families.size() != 2) {
                ok = false;
                os << sc.name << " H" << which << ": expected 2 families, got "
                   << res.families.size() << "; ";
                continue;
            }
            WindowReport rep = verify_window(res.orbits, sp);
            ok = ok && rep.all_ok;
            for (const auto& o : res.orbits) {
                double p = o.trajectory.front().p[0];
                double best = 1e9;
                for (const auto& pr : pred)
                    if (pr.which == which)
                        if (std::abs(pr.p_level - p) < 1e-4)
                            best =
                                std::min(best, std::abs(pr.action - o.action));
                max_err = std::max(max_err, best);
            }
            if (!rep.all_ok) os << sc.name << " H" << which << ": window fail; ";
        }
        ok = ok && max_err < 1e-7;
        os << sc.name << " max action error " << fmt(max_err) << "; ";
    }
    detail = os.str();
    return ok;
}

// ---- criterion 3: no-orbit certificates --------------------------------
bool check_no_orbit_certificates(Ctx&, std::string& detail) {
    bool ok = true;
    std::ostringstream os;

    AnnulusCounterexample ce = counterexample_annulus(0.6, 0.1, 1, 0.15);
    ok = ok && ce.min_slope > -1.0;
    {
        OrbitSearchOptions opt;
        opt.grid_q = 64;
        opt.grid_p = 64;
        opt.steps = 1024;
        OrbitSearchResult res = find_orbits(
            ce.hamiltonian, Chart::annulus(1.0), HomotopyClass::single(-1),
            opt);
        ok = ok && !res.any_found;
        os << "annulus: orbits=" << res.orbits.size() << " at density 64, "
           << "min slope " << fmt(ce.min_slope, "%.4f") << " > -1; ";
    }

    Vec w(2);
    w << 0.5, 0.0;
    IVec av(4);
    av << 0, 1, 0, 0;
    HomotopyClass alpha(av);
    for (int k : {1, 2, 4}) {
        LagrangianCounterexample lc = counterexample_lagrangian(2, w, k, alpha);
        OrbitSearchOptions opt;
        opt.grid_q = 8;
        opt.grid_p = 8;
        opt.steps = 512;
        OrbitSearchResult res =
            find_orbits(lc.hamiltonian, Chart::product_torus(2), alpha, opt);
        // direction certificate: beta.w nonintegral, alpha independent of beta
        Vec bd = lc.beta.cast<double>();
        double bw = bd.dot(w);
        bool cert = std::abs(bw - std::round(bw)) > 1e-9;
        ok = ok && !res.any_found && cert && lc.gap == k;
        os << "lagrangian k=" << k << ": orbits=" << res.orbits.size()
           << " of " << res.seeds << " seeds; ";
    }
    detail = os.str();
    return ok;
}

// ---- criterion 4: covering-space lemmas --------------------------------
bool check_covering_lemmas(Ctx&, std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    const int r = 1;
    HomotopyClass alpha = HomotopyClass::single(-r);

    HamiltonianPtr htor = torus_perturbed_hamiltonian();
    const double S = sup_dHdq(*htor);

    // orbits of G^k on the covering strip
    const int k = 2;
    HamiltonianPtr gk = build_Gk(htor, k);
    Chart strip = Chart::strip(k + 2.0);
    SqueezingPair sp = build_squeezing_pair(gk, strip, r, kTorusR, kTorusTau);

    OrbitSearchOptions opt;
    opt.grid_q = 6;
    opt.grid_p = 128;
    opt.p_lo = -(k + 1.2);
    opt.p_hi = k + 1.2;
    OrbitSearchResult res = find_orbits(gk, strip, alpha, opt);
    ok = ok && res.any_found;

    // action shift under T_l, synthetic loop at p = k + 0.5 plus every
    // found orbit in the upper half strip
    double worst_shift = 0;
    LiftedLoop zref = reference_loop(strip, alpha);
    for (int l : {1, 2, 5}) {
        HamiltonianPtr gkl = build_Gk(htor, k + l);
        {
            PeriodicOrbit synth;
            int nsamp = 512;
            synth.cls = alpha;
            synth.trajectory.h = 1.0 / nsamp;
            for (int i = 0; i <= nsamp; ++i) {
                double t = static_cast<double>(i) / nsamp;
                synth.trajectory.times.push_back(t);
                synth.trajectory.points.push_back(
                    PhasePoint::make1(0.25 - r * t, k + 0.5));
            }
            double a0 = action(*gk, synth, zref, strip);
            PeriodicOrbit moved = translate_orbit(synth, l, +1);
            double a1 = action(*gkl, moved, zref, strip);
            worst_shift = std::max(worst_shift, std::abs(a1 - a0 - r * l));
        }
        for (const auto& o : res.orbits) {
            bool upper = true;
            for (const auto& pt : o.trajectory.points)
                if (pt.p[0] <= 0) upper = false;
            if (!upper) continue;
            PeriodicOrbit moved = translate_orbit(o, l, +1);
            double a1 = action(*gkl, moved, zref, strip);
            worst_shift = std::max(worst_shift,
                                   std::abs(a1 - o.action - r * l));
            // the translated loop must still solve the G^{k+l} equation
            Chart strip2 = Chart::strip(k + l + 2.0);
            FlowOptions fo;
            fo.steps =
                static_cast<int>(moved.trajectory.points.size()) - 1;
            fo.store_trajectory = false;
            FlowResult fr =
                flow(*gkl, strip2, moved.trajectory.front(), fo);
            double closure =
                (fr.end.q - moved.trajectory.back().q).norm() +
                (fr.end.p - moved.trajectory.back().p).norm();
            ok = ok && closure < 1e-9;
        }
    }
    ok = ok && worst_shift < 1e-9;
    os << "action shift error " << fmt(worst_shift) << "; ";

    // osc(p) <= S for every found orbit
    double worst_osc = 0;
    for (const auto& o : res.orbits)
        worst_osc = std::max(worst_osc, osc_p(o) - S);
    ok = ok && worst_osc <= 1e-6;
    os << "osc excess " << fmt(worst_osc) << " (S=" << fmt(S) << "); ";

    // empirical minimal k at which all window orbits project
    int k_min = -1;
    double worst_res = 0;
    for (int kk = 1; kk <= 4 && k_min < 0; ++kk) {
        HamiltonianPtr g = build_Gk(htor, kk);
        Chart st = Chart::strip(kk + 2.0);
        SqueezingPair spk =
            build_squeezing_pair(g, st, r, kTorusR, kTorusTau);
        OrbitSearchOptions ok2;
        ok2.grid_q = 6;
        ok2.grid_p = 96;
        ok2.p_lo = -(kk + 1.2);
        ok2.p_hi = kk + 1.2;
        OrbitSearchResult rk = find_orbits(g, st, alpha, ok2);
        const double a_prime = spk.wc.m1 - 1;
        const double c_prime = spk.wc.C + spk.wc.S0 + 1;
        bool all_project = true;
        double wres = 0;
        int n_window = 0;
        for (const auto& o : rk.orbits) {
            if (!(o.action > a_prime && o.action < c_prime)) continue;
            ++n_window;
            try {
                PeriodicOrbit proj = project_orbit(o, spk.wc, kk, htor);
                wres = std::max(wres, proj.residual);
            } catch (const EscapesWindow&) {
                all_project = false;
            }
        }
        if (all_project && n_window > 0) {
            k_min = kk;
            worst_res = wres;
        }
    }
    ok = ok && k_min > 0 && worst_res < 1e-9;
    os << "k_min=" << k_min << ", projection residual " << fmt(worst_res);
    detail = os.str();
    return ok;
}

// ---- criterion 5: orbit-count bounds -----------------------------------
bool check_orbit_counts(Ctx&, std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    Chart torus = Chart::torus2();
    IVec av(2);
    av << -1, 0;
    HomotopyClass alpha(av);

    {
        OrbitSearchOptions opt;
        opt.grid_q = 32;
        opt.grid_p = 32;
        OrbitSearchResult res =
            find_orbits(torus_perturbed_hamiltonian(), torus, alpha, opt);
        size_t isolated = 0;
        bool nondeg = true;
        for (const auto& o : res.orbits)
            if (o.family_id < 0) {
                ++isolated;
                nondeg = nondeg && o.nondegenerate;
            }
        ok = ok && isolated >= 4 && isolated % 2 == 0 && nondeg &&
             res.families.empty();
        os << "perturbed: " << isolated << " isolated (even, nondegenerate); ";
    }
    {
        OrbitSearchOptions opt;
        opt.grid_q = 8;
        opt.grid_p = 48;
        OrbitSearchResult res =
            find_orbits(torus_base_hamiltonian(), torus, alpha, opt);
        // b from the covering-strip window constants
        HamiltonianPtr g1 = build_Gk(torus_base_hamiltonian(), 1);
        SqueezingPair sp = build_squeezing_pair(g1, Chart::strip(3.0), 1,
                                                kTorusR, kTorusTau);
        ok = ok && res.families.size() >= 2;
        if (res.families.size() >= 2) {
            double lo = 1e300, hi = -1e300;
            for (const auto& f : res.families) {
                double a = res.orbits[f.representative].action;
                lo = std::min(lo, a);
                hi = std::max(hi, a);
            }
            ok = ok && lo < sp.wc.b && sp.wc.b < hi;
            os << "unperturbed: " << res.families.size() << " families, "
               << "actions " << fmt(lo, "%.4f") << " < b=" << fmt(sp.wc.b, "%.4f")
               << " < " << fmt(hi, "%.4f");
        } else {
            os << "unperturbed: only " << res.families.size() << " families";
        }
    }
    detail = os.str();
    return ok;
}

// ---- criterion 6: T-periodic rescaling ---------------------------------
bool check_rescaling(Ctx&, std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    Chart torus = Chart::torus2();
    IVec av(2);
    av << -1, 0;
    HomotopyClass alpha(av);
    HamiltonianPtr H = torus_perturbed_hamiltonian();
    for (int T : {2, 3}) {
        HamiltonianPtr TH = scaled_hamiltonian(H, T);
        OrbitSearchOptions opt;
        opt.grid_q = 12;
        opt.grid_p = 24;
        OrbitSearchResult res = find_orbits(TH, torus, alpha, opt);
        if (res.orbits.empty()) {
            ok = false;
            os << "T=" << T << ": no orbit of TH found; ";
            continue;
        }
        double worst = 0;
        for (size_t i = 0; i < std::min<size_t>(2, res.orbits.size()); ++i)
            worst = std::max(
                worst, rescaling_residual(H, torus, res.orbits[i], T, 1024));
        ok = ok && worst < 1e-8;
        os << "T=" << T << ": residual " << fmt(worst) << "; ";
    }
    detail = os.str();
    return ok;
}

// ---- criterion 7: rotation vectors -------------------------------------
bool check_rotation_vectors(Ctx& ctx, std::string& detail) {
    if (ctx.estimates.empty()) {
        detail = "needs the capacity estimates from criterion 1";
        return false;
    }
    bool ok = true;
    std::ostringstream os;
    double worst = 0;
    for (size_t ri = 0; ri < ctx.estimates.size(); ++ri) {
        int r = static_cast<int>(ri) + 1;
        for (const auto& o : ctx.estimates[ri].witnesses) {
            RotationVector rho = rotation_vector(o, Chart::annulus(1.0));
            worst = std::max(worst, std::abs(rho.components[0] - (-r)));
        }
    }
    ok = ok && worst < 1e-9;
    os << "max |rho - class| = " << fmt(worst) << "; ";

    CpReport rep =
        cp_comparison(ctx.family, HomotopyClass::single(-1), ctx.estimates[0],
                      probe_options());
    ok = ok && rep.all_ok && !rep.vacuous;
    os << "C^P pairing ok on " << rep.entries.size() << " witnesses";
    detail = os.str();
    return ok;
}

// ---- criterion 8: numerical hygiene ------------------------------------
double fd_gradient_error(const Hamiltonian& H, const PhasePoint& x) {
    const double h = 1e-6;
    PhaseGradient g = H.gradient(0.0, x);
    double worst = 0;
    for (int i = 0; i < H.pairs(); ++i) {
        PhasePoint a = x, b = x;
        a.q[i] += h;
        b.q[i] -= h;
        double fd = (H.value(0.0, a) - H.value(0.0, b)) / (2 * h);
        worst = std::max(worst, std::abs(fd - g.dq[i]));
        a = x;
        b = x;
        a.p[i] += h;
        b.p[i] -= h;
        fd = (H.value(0.0, a) - H.value(0.0, b)) / (2 * h);
        worst = std::max(worst, std::abs(fd - g.dp[i]));
    }
    return worst;
}

bool check_numerical_hygiene(Ctx&, std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    Chart annulus = Chart::annulus(1.0);

    // autonomous energy drift at h = 1e-3
    {
        HamiltonianPtr H = cos_product_hamiltonian(
            0.02, 0.0, 1.0, 1, 0.0, g_profile(0.0, 1.0, 0.3), 1, 0, 0, 0.5,
            false);
        PhasePoint x0 = PhasePoint::make1(0.2, 0.55);
        FlowOptions fo;
        fo.steps = 1000;
        FlowResult fr = flow(*H, annulus, x0, fo);
        double H0 = H->value(0.0, x0), drift = 0;
        for (size_t i = 0; i < fr.trajectory.points.size(); ++i)
            drift = std::max(drift, std::abs(H->value(0.0,
                                                      fr.trajectory.points[i]) -
                                             H0));
        ok = ok && drift < 1e-8;
        os << "energy drift " << fmt(drift) << "; ";
    }

    // monodromy vs finite differences of the period map
    {
        HamiltonianPtr H = torus_perturbed_hamiltonian();
        Chart torus = Chart::torus2();
        IVec av(2);
        av << -1, 0;
        OrbitSearchOptions opt;
        opt.grid_q = 8;
        opt.grid_p = 16;
        OrbitSearchResult res = find_orbits(H, torus, HomotopyClass(av), opt);
        double worst = 1e300;
        if (!res.orbits.empty()) {
            const PeriodicOrbit& o = res.orbits.front();
            int steps = static_cast<int>(o.trajectory.points.size()) - 1;
            const double h = 1e-6;
            worst = 0;
            for (int j = 0; j < 2; ++j) {
                PhasePoint a = o.trajectory.front(), b = o.trajectory.front();
                (j == 0 ? a.q[0] : a.p[0]) += h;
                (j == 0 ? b.q[0] : b.p[0]) -= h;
                FlowOptions fo;
                fo.steps = steps;
                fo.store_trajectory = false;
                FlowResult fa = flow(*H, torus, a, fo);
                FlowResult fb = flow(*H, torus, b, fo);
                double dq = (fa.end.q[0] - fb.end.q[0]) / (2 * h);
                double dp = (fa.end.p[0] - fb.end.p[0]) / (2 * h);
                worst = std::max(worst,
                                 std::abs(dq - o.mono.matrix(0, j)));
                worst = std::max(worst,
                                 std::abs(dp - o.mono.matrix(1, j)));
            }
        }
        ok = ok && worst < 1e-5;
        os << "monodromy FD error " << fmt(worst) << "; ";
    }

    // symplectic product of variational solutions is conserved
    {
        HamiltonianPtr H = torus_perturbed_hamiltonian();
        Chart torus = Chart::torus2();
        FlowOptions fo;
        fo.steps = 2048;
        fo.want_monodromy_path = true;
        fo.store_trajectory = false;
        FlowResult fr = flow(*H, torus, PhasePoint::make1(0.3, 0.01), fo);
        double drift = 0, omega0 = 0;
        bool first = true;
        for (const Mat& M : fr.monodromy_path) {
            TangentVector xi{M.col(0).head(1), M.col(0).tail(1)};
            TangentVector eta{M.col(1).head(1), M.col(1).tail(1)};
            double w = symplectic_product(xi, eta);
            if (first) {
                omega0 = w;
                first = false;
            }
            drift = std::max(drift, std::abs(w - omega0));
        }
        ok = ok && drift < 1e-8;
        os << "omega drift " << fmt(drift) << "; ";
    }

    // gradient checks over every preset kind
    {
        double worst = 0;
        std::vector<std::pair<HamiltonianPtr, PhasePoint>> cases;
        cases.emplace_back(annulus_default_scenario().H,
                           PhasePoint::make1(0.3, 0.13));
        cases.emplace_back(torus_perturbed_hamiltonian(),
                           PhasePoint::make1(0.27, 0.04));
        cases.emplace_back(build_Gk(torus_base_hamiltonian(), 2),
                           PhasePoint::make1(0.27, 2.3));
        cases.emplace_back(counterexample_annulus(0.6, 0.1, 1, 0.15)
                               .hamiltonian,
                           PhasePoint::make1(0.1, 0.22));
        {
            Vec w(2);
            w << 0.5, 0.0;
            IVec av(4);
            av << 0, 1, 0, 0;
            PhasePoint x = PhasePoint::zero(2);
            x.q << 0.2, 0.8;
            x.p << 0.31, 0.62;
            cases.emplace_back(
                counterexample_lagrangian(2, w, 2, HomotopyClass(av))
                    .hamiltonian,
                x);
        }
        cases.emplace_back(annulus_capacity_family(0.6).builder(0.7),
                           PhasePoint::make1(0.4, 0.61));
        for (auto& [H, x] : cases)
            worst = std::max(worst, fd_gradient_error(*H, x));
        ok = ok && worst < 1e-6;
        os << "gradient FD error " << fmt(worst) << "; ";
    }

    // byte-identical rerun of an orbit search export
    {
        HamiltonianPtr H = torus_perturbed_hamiltonian();
        Chart torus = Chart::torus2();
        IVec av(2);
        av << -1, 0;
        OrbitSearchOptions opt;
        opt.grid_q = 16;
        opt.grid_p = 16;
        auto dump = [&]() {
            OrbitSearchResult res =
                find_orbits(H, torus, HomotopyClass(av), opt);
            return orbits_to_json(res, torus).dump();
        };
        std::string s1 = dump();
        std::string s2 = dump();
        ok = ok && s1 == s2 && !s1.empty();
        os << "rerun bytes " << (s1 == s2 ? "identical" : "DIFFER");
    }
    detail = os.str();
    return ok;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
#ifdef _OPENMP
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
#else
    (void)opt;
#endif
    Ctx ctx;
    std::vector<CriterionResult> out;
    out.push_back(run_one(1, "capacity value r*Area", ctx,
                          check_capacity_value));
    out.push_back(run_one(2, "closed-form actions and windows", ctx,
                          check_closed_form_actions));
    out.push_back(run_one(3, "no-orbit certificates", ctx,
                          check_no_orbit_certificates));
    out.push_back(run_one(4, "covering-space lemmas", ctx,
                          check_covering_lemmas));
    out.push_back(run_one(5, "orbit-count bounds", ctx, check_orbit_counts));
    out.push_back(run_one(6, "T-periodic rescaling", ctx, check_rescaling));
    out.push_back(run_one(7, "rotation vectors and C^P <= C", ctx,
                          check_rotation_vectors));
    out.push_back(run_one(8, "numerical hygiene", ctx,
                          check_numerical_hygiene));
    return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::string format_result_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name
       << "  (" << fmt(r.seconds, "%.1f") << " s)";
    if (!r.detail.empty()) os << "  -- " << r.detail;
    return os.str();
}

}  // namespace hamcap
