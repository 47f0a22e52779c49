#include "hamcap/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hamcap/acceptance.hpp"
#include "hamcap/presets.hpp"
#include "hamcap/profile.hpp"
#include "hamcap/svg.hpp"

namespace hamcap {

namespace {

namespace fs = std::filesystem;

void apply_threads(const RunConfig& cfg) {
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#else
    (void)cfg;
#endif
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out);
    return (fs::path(cfg.out) / name).string();
}

OrbitSearchOptions search_options(const RunConfig& cfg) {
    OrbitSearchOptions opt;
    opt.grid_q = cfg.grid;
    opt.grid_p = cfg.grid_p > 0 ? cfg.grid_p : cfg.grid;
    opt.steps = cfg.steps;
    opt.tol = cfg.tol;
    opt.seed = cfg.seed;
    return opt;
}

// exact constant-level loop in the class, for closed-form action printing
PeriodicOrbit synthetic_level_orbit(double p_level, int r, int samples = 512) {
    PeriodicOrbit o;
    o.cls = HomotopyClass::single(-r);
    o.trajectory.h = 1.0 / samples;
    for (int i = 0; i <= samples; ++i) {
        double t = static_cast<double>(i) / samples;
        o.trajectory.times.push_back(t);
        o.trajectory.points.push_back(PhasePoint::make1(-r * t, p_level));
    }
    return o;
}

struct ProfilePanel {
    std::string title;
    SmoothProfile curve;        // plotted as y = curve(p)
    double p_lo, p_hi;
    std::vector<std::pair<double, double>> tangent_pts;  // (level, value)
    std::vector<std::array<double, 3>> lines;  // slope, x0, y0: y=y0-s(x-x0)
};

void render_panel(SvgPlot& plot, const ProfilePanel& panel, int samples,
                  double r) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= samples; ++i) {
        double p = panel.p_lo + (panel.p_hi - panel.p_lo) * i / samples;
        pts.emplace_back(p, panel.curve.value(p));
    }
    plot.polyline(pts, "#1f3b99", 1.6);
    const char* colors[4] = {"#b03030", "#b07a30", "#308a50", "#7a30b0"};
    for (size_t i = 0; i < panel.lines.size(); ++i) {
        const auto& ln = panel.lines[i];
        double s = ln[0], x0 = ln[1], y0 = ln[2];
        plot.line(panel.p_lo, y0 - s * (panel.p_lo - x0), panel.p_hi,
                  y0 - s * (panel.p_hi - x0), colors[i % 4], 0.9, "4,3");
    }
    for (const auto& [pl, val] : panel.tangent_pts) {
        // slope -r tangent line at the orbit level
        plot.line(panel.p_lo, val - (-r) * (pl - panel.p_lo), panel.p_hi,
                  val + (-r) * (panel.p_hi - pl), "#208080", 1.1);
        plot.marker(pl, val, "#208080");
    }
}

}  // namespace

int cmd_profiles(const RunConfig& cfg) {
    apply_threads(cfg);
    std::string preset = cfg.preset.empty() ? "annulus-default" : cfg.preset;

    if (preset == "torus-gk") {
        const int k = 2;
        HamiltonianPtr gk = build_Gk(torus_base_hamiltonian(), k);
        const double lo = -(k + 1.5), hi = k + 1.5;
        SvgPlot plot(760, 420, lo, hi, -0.05, 0.65, "G^k slice at q = 0");
        std::vector<std::pair<double, double>> pts, env;
        std::ostringstream csv;
        csv << "p,Gk,nu\n";
        for (int i = 0; i <= 2000; ++i) {
            double p = lo + (hi - lo) * i / 2000;
            double v = gk->value(0.0, PhasePoint::make1(0.0, p));
            double nu = mu(std::abs(p) - k);
            pts.emplace_back(p, v);
            env.emplace_back(p, 0.5 * nu);
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p, v, nu);
            csv << buf;
        }
        plot.polyline(pts, "#1f3b99", 1.6);
        plot.polyline(env, "#b03030", 0.9, "4,3");
        plot.axes();
        write_text_file(out_path(cfg, "profiles_torus-gk.svg"), plot.str());
        write_text_file(out_path(cfg, "profiles_torus-gk.csv"), csv.str());
        std::cout << "torus-gk: wrote G^" << k << " slice (2001 samples)\n";
        return 0;
    }

    SqueezeScenario sc =
        preset == "annulus-r2" ? annulus_r2_scenario() : annulus_default_scenario();
    SqueezingPair sp = build_squeezing_pair(sc.H, sc.chart, sc.r, sc.R, sc.tau,
                                            {}, cfg.seed);
    const WindowConstants& w = sp.wc;

    // comparison lines of the window estimates
    ProfilePanel p0;
    p0.title = "h0";
    p0.curve = {[&](double p) { return sp.h0.value(p - w.R); },
                [&](double p) { return sp.h0.d1(p - w.R); },
                [&](double p) { return sp.h0.d2(p - w.R); }};
    p0.p_lo = -w.tau;
    p0.p_hi = w.R + w.tau;
    p0.lines = {{{double(w.r), w.R, w.S0}},
                {{double(w.r), w.R - w.eps1, w.S0}},
                {{double(w.r), w.R, w.m0}},
                {{double(w.r), 0.0, w.m0}}};
    p0.tangent_pts = {{w.R - w.s0, sp.h0.value(-w.s0)},
                      {w.R - w.s1, sp.h0.value(-w.s1)}};

    ProfilePanel p1;
    p1.title = "h1";
    p1.curve = sp.h1;
    p1.p_lo = -w.tau;
    p1.p_hi = w.R + w.tau;
    p1.lines = {{{double(w.r), w.eps1, w.S1}},
                {{double(w.r), 0.0, w.S1}},
                {{double(w.r), w.eps1, w.m1}},
                {{0.0, 0.0, w.m1}}};
    p1.tangent_pts = {{w.s0, sp.h1.value(w.s0)}, {w.s1, sp.h1.value(w.s1)}};

    double ylo = w.m1 - 0.2 * (w.S0 - w.m1), yhi = w.S0 + 0.2 * (w.S0 - w.m1);
    SvgPlot plot0(760, 420, p0.p_lo, p0.p_hi, ylo, yhi, "h0 with l1..l4");
    render_panel(plot0, p0, 1200, w.r);
    plot0.axes();
    SvgPlot plot1(760, 420, p1.p_lo, p1.p_hi, ylo, yhi, "h1 with l1'..l4'");
    render_panel(plot1, p1, 1200, w.r);
    plot1.axes();
    write_text_file(out_path(cfg, "profiles_" + sc.name + "_h0.svg"),
                    plot0.str());
    write_text_file(out_path(cfg, "profiles_" + sc.name + "_h1.svg"),
                    plot1.str());

    // CSV of sampled values
    {
        std::ostringstream csv;
        csv << "p,h0,h1\n";
        const int N = 1200;
        for (int i = 0; i <= N; ++i) {
            double p = p0.p_lo + (p0.p_hi - p0.p_lo) * i / N;
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p,
                          sp.h0.value(p - w.R), sp.h1.value(p));
            csv << buf;
        }
        write_text_file(out_path(cfg, "profiles_" + sc.name + ".csv"),
                        csv.str());
    }

    // tangent-line y-intercepts versus quadrature actions
    LiftedLoop zref = reference_loop(sc.chart, HomotopyClass::single(-sc.r));
    bool ok = true;
    for (const PredictedOrbit& pr : predicted_squeezing_orbits(sp)) {
        PeriodicOrbit orb = synthetic_level_orbit(pr.p_level, sc.r, cfg.steps);
        const Hamiltonian& Hi = pr.which == 0 ? *sp.H0 : *sp.H1;
        double quad = action(Hi, orb, zref, sc.chart);
        double err = std::abs(quad - pr.action);
        ok = ok && err < 1e-8;
        std::printf("H%d orbit at p=%.6f: intercept %.9f quadrature %.9f "
                    "err %.2e window (%.6f, %.6f)\n",
                    pr.which, pr.p_level, pr.action, quad, err, pr.window_lo,
                    pr.window_hi);
    }
    std::printf("%s: eps1=%.6g s0=%.8g s1=%.8g a=%.6g b=%.6g c=%.6g\n",
                sc.name.c_str(), w.eps1, w.s0, w.s1, w.a, w.b, w.c);
    return ok ? 0 : 1;
}

int cmd_orbits(const RunConfig& cfg) {
    apply_threads(cfg);
    if (cfg.hamiltonian.is_null()) {
        std::cerr << "orbits: config needs a hamiltonian preset\n";
        return 2;
    }
    HamiltonianPtr H;
    try {
        H = hamiltonian_from_json(cfg.hamiltonian);
    } catch (const Error& e) {
        std::cerr << "orbits: " << e.what() << "\n";
        return 2;
    }
    if (cfg.cls.winding.size() != cfg.chart.winding_size()) {
        std::cerr << "orbits: class length does not match chart\n";
        return 2;
    }

    OrbitSearchOptions opt = search_options(cfg);
    OrbitSearchResult res = find_orbits(H, cfg.chart, cfg.cls, opt);

    write_text_file(out_path(cfg, "orbits.json"),
                    orbits_to_json(res, cfg.chart).dump(2) + "\n");
    write_text_file(out_path(cfg, "orbits.csv"), orbits_to_csv(res, cfg.chart));
    for (size_t i = 0; i < res.orbits.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "trajectory_%03zu.csv", i);
        write_text_file(out_path(cfg, name),
                        trajectory_to_csv(res.orbits[i].trajectory, *H));
    }

    // phase portrait
    {
        SupportBox sb = H->support();
        double plo = cfg.chart.p_periodic() ? 0.0 : sb.p_lo.minCoeff();
        double phi = cfg.chart.p_periodic() ? 1.0 : sb.p_hi.maxCoeff();
        SvgPlot plot(760, 520, 0.0, 1.0, plo, phi, "orbits (q mod 1, p)");
        for (const auto& o : res.orbits) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& x : o.trajectory.points) {
                double q = x.q[0] - std::floor(x.q[0]);
                if (!pts.empty() && std::abs(q - pts.back().first) > 0.5) {
                    plot.polyline(pts, o.family_id >= 0 ? "#1f3b99" : "#b03030",
                                  1.2);
                    pts.clear();
                }
                pts.emplace_back(q, x.p[0]);
            }
            plot.polyline(pts, o.family_id >= 0 ? "#1f3b99" : "#b03030", 1.2);
        }
        plot.axes();
        write_text_file(out_path(cfg, "orbits.svg"), plot.str());
    }

    std::printf("%zu orbits (%zu families) from %ld seeds at density %dx%d\n",
                res.orbits.size(), res.families.size(), res.seeds, opt.grid_q,
                opt.grid_p);
    if (!res.any_found)
        std::printf("0 orbits at density %d\n", opt.grid_q);

    int exit_code = 0;
    if (cfg.has_squeeze) {
        SqueezingPair sp = build_squeezing_pair(H, cfg.chart, cfg.r, cfg.R,
                                                cfg.tau, {}, cfg.seed);
        for (int which = 0; which < 2; ++which) {
            const HamiltonianPtr& Hi = which == 0 ? sp.H0 : sp.H1;
            OrbitSearchResult ri = find_orbits(Hi, cfg.chart,
                                               HomotopyClass::single(-cfg.r),
                                               opt);
            WindowReport rep = verify_window(ri.orbits, sp);
            std::printf("H%d: %zu orbit groups, windows %s\n", which,
                        ri.orbits.size(), rep.all_ok ? "ok" : "VIOLATED");
            for (const auto& c : rep.checks)
                if (!c.ok)
                    std::printf("  violation: p=%.6f action=%.6f window "
                                "(%.6f, %.6f)\n",
                                c.p_level, c.action, c.lo, c.hi);
            if (!rep.all_ok) exit_code = 1;
        }
    }
    if (cfg.chart.kind == ChartKind::Torus2) {
        size_t isolated = 0;
        for (const auto& o : res.orbits)
            if (o.family_id < 0) ++isolated;
        if (isolated > 0)
            std::printf("evenness check: %zu isolated orbits -> %s\n", isolated,
                        isolated % 2 == 0 ? "pass" : "FAIL");
        if (isolated % 2 != 0) exit_code = 1;
    }
    return exit_code;
}

int cmd_capacity(const RunConfig& cfg) {
    apply_threads(cfg);
    if (!cfg.has_capacity) {
        std::cerr << "capacity: config needs a capacity block\n";
        return 2;
    }
    int r = cfg.cls.winding.size() > 0 ? -cfg.cls.winding[0] : 1;
    HomotopyClass alpha = cfg.cls.winding.size() > 0
                              ? cfg.cls
                              : HomotopyClass::single(-1);

    HamiltonianFamily fam;
    if (cfg.family == "annulus") {
        fam = annulus_capacity_family(cfg.R);
    } else if (cfg.family == "lagrangian") {
        int n = cfg.w.size() > 0 ? static_cast<int>(cfg.w.size()) : 2;
        Vec w = cfg.w;
        if (w.size() == 0) {
            w.resize(2);
            w << 0.5, 0.0;
        }
        fam = lagrangian_capacity_family(n, w, alpha);
    } else {
        std::cerr << "capacity: unknown family " << cfg.family << "\n";
        return 2;
    }

    double c_lo = cfg.c_lo, c_hi = cfg.c_hi;
    if (c_lo == 0.0 && c_hi == 0.0) {
        c_lo = 0.5 * r * cfg.R;
        c_hi = 1.5 * r * cfg.R;
    }
    OrbitSearchOptions opt = search_options(cfg);
    try {
        CapacityEstimate est =
            estimate_capacity(fam, alpha, c_lo, c_hi, cfg.c_tol, opt);
        CpReport cp = cp_comparison(fam, alpha, est, opt);
        json out = capacity_to_json(est, fam.chart);
        out["cp_comparison"] = {{"all_ok", cp.all_ok},
                                {"vacuous", cp.vacuous},
                                {"entries", cp.entries.size()}};
        write_text_file(out_path(cfg, "capacity.json"), out.dump(2) + "\n");
        std::printf("capacity bracket [%.6f, %.6f] width %.2e, %zu witnesses\n",
                    est.lower, est.upper, est.upper - est.lower,
                    est.witnesses.size());
        for (const auto& o : est.witnesses)
            std::printf("  witness p=%.6f action=%.6f residual=%.2e\n",
                        o.trajectory.front().p[0], o.action, o.residual);
        return 0;
    } catch (const BracketInvalid& e) {
        std::printf("no upper witness found <= c_max (%s)\n", e.what());
        return 2;
    }
}

int cmd_verify(const RunConfig& cfg) {
    AcceptanceOptions opt;
    opt.threads = cfg.threads;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<CriterionResult> results = run_acceptance(opt);
    double total = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    json out = json::array();
    for (const auto& r : results) {
        std::cout << format_result_line(r) << "\n";
        out.push_back({{"id", r.id},
                       {"name", r.name},
                       {"pass", r.pass},
                       {"seconds", r.seconds},
                       {"detail", r.detail}});
    }
    write_text_file(out_path(cfg, "verify.json"),
                    json({{"criteria", out}, {"all_pass", all_passed(results)}})
                            .dump(2) +
                        "\n");
    std::printf("total runtime %.1f s\n", total);
    return all_passed(results) ? 0 : 1;
}

}  // namespace hamcap
