#include "hamcap/orbits.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hamcap {

namespace {

Vec class_displacement(const Chart& chart, const HomotopyClass& alpha) {
    const int n = chart.pairs;
    Vec d = Vec::Zero(2 * n);
    for (int i = 0; i < n; ++i) d[i] = alpha.winding[i];
    if (chart.p_periodic())
        for (int i = 0; i < n; ++i) d[n + i] = alpha.winding[n + i];
    return d;
}

Vec pack(const PhasePoint& x) {
    Vec z(x.q.size() + x.p.size());
    z << x.q, x.p;
    return z;
}

// distance respecting periodic coordinates
double chart_distance(const Chart& chart, const PhasePoint& a,
                      const PhasePoint& b) {
    double s = 0;
    for (int i = 0; i < chart.pairs; ++i) {
        double dq = a.q[i] - b.q[i];
        dq -= std::round(dq);
        s += dq * dq;
        double dp = a.p[i] - b.p[i];
        if (chart.p_periodic()) dp -= std::round(dp);
        s += dp * dp;
    }
    return std::sqrt(s);
}

bool lex_less(const PhasePoint& a, const PhasePoint& b) {
    for (int i = 0; i < a.p.size(); ++i) {
        if (a.p[i] != b.p[i]) return a.p[i] < b.p[i];
    }
    for (int i = 0; i < a.q.size(); ++i) {
        if (a.q[i] != b.q[i]) return a.q[i] < b.q[i];
    }
    return false;
}

double det_m_minus_i(const Mat& M) {
    Mat D = M - Mat::Identity(M.rows(), M.cols());
    return D.determinant();
}

struct ShotOutcome {
    bool converged = false;
    PhasePoint z;
    double residual = 0;
    Mat monodromy;
};

// Newton iteration on F(z) = phi^1(z) - z - alpha with an SVD
// pseudo-inverse step so Morse-Bott circles (singular Jacobian) converge
// onto the family instead of failing.
ShotOutcome shoot(const Hamiltonian& H, const Chart& chart, const Vec& disp,
                  PhasePoint z, const OrbitSearchOptions& opt, int steps,
                  double box_lo, double box_hi) {
    const int n = chart.pairs;
    FlowOptions fo;
    fo.steps = steps;
    fo.want_monodromy = true;
    fo.store_trajectory = false;

    ShotOutcome out;
    double prev_res = std::numeric_limits<double>::infinity();
    int stall = 0;
    for (int it = 0; it < opt.newton_max; ++it) {
        FlowResult fr;
        try {
            fr = flow(H, chart, z, fo);
        } catch (const Error&) {
            return out;
        }
        Vec F = pack(fr.end) - pack(z) - disp;
        double res = F.norm();
        if (!std::isfinite(res)) return out;
        if (res < opt.tol) {
            out.converged = true;
            out.z = z;
            out.residual = res;
            out.monodromy = fr.monodromy;
            return out;
        }
        if (res > 0.5 * prev_res) {
            if (++stall >= 4) return out;
        } else {
            stall = 0;
        }
        prev_res = res;

        Mat J = fr.monodromy - Mat::Identity(2 * n, 2 * n);
        Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-8);
        Vec step = svd.solve(-F);
        double norm = step.norm();
        if (norm > 0.25) step *= 0.25 / norm;  // trust region
        for (int i = 0; i < n; ++i) {
            z.q[i] += step[i];
            z.p[i] += step[n + i];
        }
        z = canonical_rep(chart, z);
        for (int i = 0; i < n; ++i)
            if (z.p[i] < box_lo - 0.5 || z.p[i] > box_hi + 0.5) return out;
    }
    return out;
}

}  // namespace

DedupeOutcome dedupe(const Chart& chart, std::vector<Candidate> candidates,
                     double radius, double nondeg_tol) {
    DedupeOutcome out;
    const size_t m = candidates.size();
    if (m == 0) return out;

    // union-find clustering at the given radius
    std::vector<size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            if (chart_distance(chart, candidates[i].z0, candidates[j].z0) <
                radius)
                parent[find(i)] = find(j);

    std::vector<std::vector<size_t>> clusters;
    {
        std::vector<long> slot(m, -1);
        for (size_t i = 0; i < m; ++i) {
            size_t r = find(i);
            if (slot[r] < 0) {
                slot[r] = static_cast<long>(clusters.size());
                clusters.emplace_back();
            }
            clusters[slot[r]].push_back(i);
        }
    }

    // cluster representatives and the point-like / curve-like split
    struct Rep {
        Candidate cand;
        bool degenerate;
    };
    std::vector<Rep> reps;
    for (auto& cl : clusters) {
        double diam = 0;
        for (size_t a = 0; a < cl.size(); ++a)
            for (size_t b = a + 1; b < cl.size(); ++b)
                diam = std::max(diam,
                                chart_distance(chart, candidates[cl[a]].z0,
                                               candidates[cl[b]].z0));
        size_t best = cl[0];
        for (size_t i : cl)
            if (lex_less(candidates[i].z0, candidates[best].z0)) best = i;
        bool all_degenerate = true;
        for (size_t i : cl)
            if (std::abs(det_m_minus_i(candidates[i].monodromy)) > nondeg_tol)
                all_degenerate = false;
        if (diam > 5 * radius) {
            if (!all_degenerate)
                throw AmbiguousCluster(
                    "cluster is neither point-like nor curve-like");
            // a densely sampled curve collapsed into one cluster
            std::vector<Candidate> fam;
            for (size_t i : cl) fam.push_back(candidates[i]);
            std::sort(fam.begin(), fam.end(), [](const auto& a, const auto& b) {
                return lex_less(a.z0, b.z0);
            });
            out.families.push_back(std::move(fam));
            continue;
        }
        reps.push_back({candidates[best], all_degenerate});
    }

    // group degenerate representatives lying along a common solution curve
    const double level_tol = std::max(1e-6, 10 * radius);
    std::vector<size_t> fparent(reps.size());
    std::iota(fparent.begin(), fparent.end(), 0);
    auto ffind = [&](size_t i) {
        while (fparent[i] != i) i = fparent[i] = fparent[fparent[i]];
        return i;
    };
    auto tangent_ok = [&](const Rep& a, const Rep& b) {
        const int n = chart.pairs;
        Vec d(2 * n);
        for (int i = 0; i < n; ++i) {
            double dq = b.cand.z0.q[i] - a.cand.z0.q[i];
            dq -= std::round(dq);
            d[i] = dq;
            double dp = b.cand.z0.p[i] - a.cand.z0.p[i];
            if (chart.p_periodic()) dp -= std::round(dp);
            d[n + i] = dp;
        }
        double nd = d.norm();
        if (nd == 0) return true;
        d /= nd;
        Mat J = a.cand.monodromy -
                Mat::Identity(2 * chart.pairs, 2 * chart.pairs);
        return (J * d).norm() <= 1e-4 * (1.0 + J.norm());
    };
    for (size_t i = 0; i < reps.size(); ++i) {
        if (!reps[i].degenerate) continue;
        for (size_t j = i + 1; j < reps.size(); ++j) {
            if (!reps[j].degenerate) continue;
            double dp = 0;
            for (int cIdx = 0; cIdx < chart.pairs; ++cIdx) {
                double v = reps[i].cand.z0.p[cIdx] - reps[j].cand.z0.p[cIdx];
                if (chart.p_periodic()) v -= std::round(v);
                dp = std::max(dp, std::abs(v));
            }
            if (dp <= level_tol && tangent_ok(reps[i], reps[j]) &&
                tangent_ok(reps[j], reps[i]))
                fparent[ffind(i)] = ffind(j);
        }
    }
    std::vector<std::vector<size_t>> fgroups;
    {
        std::vector<long> slot(reps.size(), -1);
        for (size_t i = 0; i < reps.size(); ++i) {
            size_t r = ffind(i);
            if (slot[r] < 0) {
                slot[r] = static_cast<long>(fgroups.size());
                fgroups.emplace_back();
            }
            fgroups[slot[r]].push_back(i);
        }
    }
    for (auto& g : fgroups) {
        if (g.size() == 1 && !reps[g[0]].degenerate) {
            out.isolated.push_back(reps[g[0]].cand);
            continue;
        }
        std::vector<Candidate> fam;
        for (size_t i : g) fam.push_back(reps[i].cand);
        std::sort(fam.begin(), fam.end(), [](const auto& a, const auto& b) {
            return lex_less(a.z0, b.z0);
        });
        out.families.push_back(std::move(fam));
    }

    auto cand_less = [](const Candidate& a, const Candidate& b) {
        return lex_less(a.z0, b.z0);
    };
    std::sort(out.isolated.begin(), out.isolated.end(), cand_less);
    std::sort(out.families.begin(), out.families.end(),
              [&](const auto& a, const auto& b) {
                  return lex_less(a.front().z0, b.front().z0);
              });
    return out;
}

namespace {

OrbitSearchResult search_impl(const HamiltonianPtr& H, const Chart& chart,
                              const HomotopyClass& alpha,
                              const OrbitSearchOptions& opt, bool parallel) {
    if (alpha.winding.size() != chart.winding_size())
        throw ClassMismatch("class winding length does not match chart");
    const int n = chart.pairs;
    const Vec disp = class_displacement(chart, alpha);

    // seed box
    SupportBox sb = H->support();
    double box_lo, box_hi;
    if (opt.p_lo < opt.p_hi) {
        box_lo = opt.p_lo;
        box_hi = opt.p_hi;
    } else if (chart.p_periodic()) {
        box_lo = 0.0;
        box_hi = 1.0;
    } else {
        box_lo = std::max(sb.p_lo.minCoeff(), chart.flow_p_min());
        box_hi = std::min(sb.p_hi.maxCoeff(), chart.flow_p_max());
    }

    const double golden = 0.6180339887498949;
    const double jitter = std::fmod((opt.seed + 1) * golden, 1.0);

    const long nq = opt.grid_q, np = opt.grid_p;
    long total = 1;
    for (int i = 0; i < n; ++i) total *= nq * np;

    std::vector<char> got(total, 0);
    std::vector<Candidate> cands(total);
    std::atomic<bool> stop{false};
    std::atomic<long> n_conv{0};

    auto run_seed = [&](long s) {
        if (opt.early_exit && stop.load(std::memory_order_relaxed)) return;
        // decode mixed-radix index: q axes then p axes per pair
        PhasePoint z = PhasePoint::zero(n);
        long rem = s;
        for (int i = 0; i < n; ++i) {
            long iq = rem % nq;
            rem /= nq;
            long ip = rem % np;
            rem /= np;
            z.q[i] = (iq + jitter) / nq;
            double frac = (ip + jitter) / np;
            z.p[i] = chart.p_periodic() ? frac : box_lo + (box_hi - box_lo) * frac;
        }
        ShotOutcome so =
            shoot(*H, chart, disp, z, opt, opt.steps, box_lo, box_hi);
        if (!so.converged) return;
        cands[s] = Candidate{canonical_rep(chart, so.z), so.residual,
                             so.monodromy};
        got[s] = 1;
        n_conv.fetch_add(1, std::memory_order_relaxed);
        if (opt.early_exit) stop.store(true, std::memory_order_relaxed);
    };

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
        for (long s = 0; s < total; ++s) run_seed(s);
    } else {
        for (long s = 0; s < total; ++s) run_seed(s);
    }

    OrbitSearchResult out;
    out.seeds = total;
    out.converged = n_conv.load();
    out.any_found = out.converged > 0;

    if (opt.early_exit) {
        // probe mode: only the emptiness verdict is reported
        out.complete = !out.any_found;
        return out;
    }

    std::vector<Candidate> collected;
    collected.reserve(out.converged);
    for (long s = 0; s < total; ++s)
        if (got[s]) collected.push_back(cands[s]);

    DedupeOutcome dd =
        dedupe(chart, std::move(collected), opt.dedupe_radius, opt.nondeg_tol);

    struct Rep {
        Candidate cand;
        std::vector<PhasePoint> members;
        bool is_family;
    };
    std::vector<Rep> reps;
    for (auto& c : dd.isolated) reps.push_back({c, {c.z0}, false});
    for (auto& fam : dd.families) {
        std::vector<PhasePoint> members;
        for (auto& c : fam) members.push_back(c.z0);
        reps.push_back({fam.front(), std::move(members), true});
    }
    std::sort(reps.begin(), reps.end(), [](const Rep& a, const Rep& b) {
        return lex_less(a.cand.z0, b.cand.z0);
    });

    LiftedLoop zref = reference_loop(chart, alpha);
    for (auto& rep : reps) {
        // re-verify at doubled steps; re-polish there if the residual grew
        int steps = opt.steps;
        PhasePoint z0 = rep.cand.z0;
        double res = rep.cand.residual;
        Mat M = rep.cand.monodromy;
        if (opt.refine) {
            for (int pass = 0; pass < 2; ++pass) {
                int s2 = steps * 2;
                ShotOutcome so =
                    shoot(*H, chart, disp, z0, opt, s2, box_lo, box_hi);
                if (!so.converged) break;
                bool stable = chart_distance(chart, so.z, z0) < 1e-9;
                z0 = canonical_rep(chart, so.z);
                res = so.residual;
                M = so.monodromy;
                steps = s2;
                if (stable) break;
            }
        }
        FlowOptions fo;
        fo.steps = steps;
        FlowResult fr = flow(*H, chart, z0, fo);

        PeriodicOrbit orb;
        orb.trajectory = std::move(fr.trajectory);
        orb.cls = winding_class(chart, orb.trajectory.points);
        if (!(orb.cls == alpha)) continue;  // converged to the wrong class
        orb.mono = Monodromy{M};
        orb.nondegenerate = is_nondegenerate(orb.mono, opt.nondeg_tol);
        orb.residual = res;
        if (rep.is_family) {
            orb.family_id = static_cast<int>(out.families.size());
            OrbitFamily f;
            f.members = rep.members;
            f.representative = static_cast<int>(out.orbits.size());
            double pm = 0;
            for (auto& m_ : f.members) pm += m_.p[0];
            f.p_level = pm / f.members.size();
            out.families.push_back(std::move(f));
        }
        orb.action = action(*H, orb, zref, chart);
        out.orbits.push_back(std::move(orb));
    }
    out.any_found = !out.orbits.empty();
    return out;
}

}  // namespace

OrbitSearchResult find_orbits(const HamiltonianPtr& H, const Chart& chart,
                              const HomotopyClass& alpha,
                              const OrbitSearchOptions& opt) {
    return search_impl(H, chart, alpha, opt, opt.parallel);
}

OrbitSearchResult find_orbits_serial(const HamiltonianPtr& H,
                                     const Chart& chart,
                                     const HomotopyClass& alpha,
                                     OrbitSearchOptions opt) {
    return search_impl(H, chart, alpha, opt, false);
}

double loop_p_dq(const std::vector<PhasePoint>& points) {
    double s = 0;
    for (size_t k = 0; k + 1 < points.size(); ++k) {
        const PhasePoint& a = points[k];
        const PhasePoint& b = points[k + 1];
        for (int i = 0; i < a.q.size(); ++i)
            s += 0.5 * (a.p[i] + b.p[i]) * (b.q[i] - a.q[i]);
    }
    return s;
}

double action(const Hamiltonian& H, const PeriodicOrbit& orbit,
              const LiftedLoop& z, const Chart& chart) {
    HomotopyClass zc = winding_class(chart, z.points);
    if (!(orbit.cls == zc))
        throw ClassMismatch("orbit and reference loop classes differ");
    const auto& t = orbit.trajectory.times;
    const auto& x = orbit.trajectory.points;
    double ih = 0;
    double prev = H.value(t[0], x[0]);
    for (size_t k = 0; k + 1 < x.size(); ++k) {
        double cur = H.value(t[k + 1], x[k + 1]);
        ih += 0.5 * (prev + cur) * (t[k + 1] - t[k]);
        prev = cur;
    }
    double area = loop_p_dq(orbit.trajectory.points) - loop_p_dq(z.points);
    return ih - area;
}

ActionSpectrum action_spectrum(const std::vector<PeriodicOrbit>& orbits,
                               double merge_radius) {
    ActionSpectrum sp;
    for (size_t i = 0; i < orbits.size(); ++i)
        sp.entries.emplace_back(orbits[i].action, static_cast<int>(i));
    std::sort(sp.entries.begin(), sp.entries.end());
    std::vector<std::pair<double, int>> merged;
    for (auto& e : sp.entries) {
        if (!merged.empty() && e.first - merged.back().first < merge_radius)
            continue;
        merged.push_back(e);
    }
    sp.entries = std::move(merged);
    return sp;
}

WindowReport verify_window(const std::vector<PeriodicOrbit>& orbits,
                           const SqueezingPair& sp) {
    std::vector<PredictedOrbit> pred = predicted_squeezing_orbits(sp);
    WindowReport rep;
    for (size_t i = 0; i < orbits.size(); ++i) {
        double p = orbits[i].trajectory.front().p[0];
        const PredictedOrbit* best = nullptr;
        double bd = std::numeric_limits<double>::infinity();
        for (const auto& pr : pred) {
            double d = std::abs(pr.p_level - p);
            if (d < bd) {
                bd = d;
                best = &pr;
            }
        }
        WindowCheck c;
        c.orbit = static_cast<int>(i);
        c.p_level = p;
        c.action = orbits[i].action;
        c.lo = best->window_lo;
        c.hi = best->window_hi;
        c.ok = (c.action > c.lo && c.action < c.hi);
        rep.checks.push_back(c);
        rep.all_ok = rep.all_ok && c.ok;
    }
    return rep;
}

PeriodicOrbit translate_orbit(const PeriodicOrbit& x, int l, int sign) {
    if (sign != 1 && sign != -1)
        throw ConfigError("translation sign must be +1 or -1");
    if (l < 0) throw ConfigError("translation distance must be >= 0");
    if (l == 0) return x;
    for (const auto& pt : x.trajectory.points)
        if (sign * pt.p[0] <= 0)
            throw NotInHalfStrip("orbit leaves the half strip {sign p > 0}");
    PeriodicOrbit y = x;
    for (auto& pt : y.trajectory.points) pt.p[0] += sign * l;
    y.family_id = -1;
    return y;
}

double osc_p(const PeriodicOrbit& x) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& pt : x.trajectory.points) {
        lo = std::min(lo, pt.p[0]);
        hi = std::max(hi, pt.p[0]);
    }
    return hi - lo;
}

double sup_dHdq(const Hamiltonian& torus_H) {
    double s = 0;
    const int N = 256;
    for (int iq = 0; iq < N; ++iq)
        for (int ip = 0; ip < N; ++ip) {
            PhasePoint x = PhasePoint::make1(static_cast<double>(iq) / N,
                                             static_cast<double>(ip) / N);
            s = std::max(s, std::abs(torus_H.gradient(0.0, x).dq[0]));
        }
    return s;
}

bool osc_check(const PeriodicOrbit& x, const Hamiltonian& torus_H) {
    return osc_p(x) <= sup_dHdq(torus_H) + 1e-6;
}

PeriodicOrbit project_orbit(const PeriodicOrbit& x, const WindowConstants& wc,
                            int k, const HamiltonianPtr& torus_H, double tol) {
    const double a_prime = wc.m1 - 1;
    const double c_prime = wc.C + wc.S0 + 1;
    if (!(x.action > a_prime && x.action < c_prime))
        throw ConfigError("orbit action outside (a', c')");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& pt : x.trajectory.points) {
        lo = std::min(lo, pt.p[0]);
        hi = std::max(hi, pt.p[0]);
    }
    if (std::max(std::abs(lo), std::abs(hi)) >= k)
        throw EscapesWindow(lo, hi, "orbit reaches {|p| >= k}");

    Chart torus = Chart::torus2();
    IVec w(2);
    w << x.cls.winding[0], 0;
    HomotopyClass alpha(w);
    PhasePoint start = canonical_rep(torus, x.trajectory.front());

    FlowOptions fo;
    fo.steps = static_cast<int>(x.trajectory.points.size()) - 1;
    fo.want_monodromy = true;
    FlowResult fr = flow(*torus_H, torus, start, fo);
    Vec F = pack(fr.end) - pack(start) - class_displacement(torus, alpha);
    if (F.norm() > tol)
        throw Error("projected orbit does not solve the torus equation");

    PeriodicOrbit y;
    y.trajectory = std::move(fr.trajectory);
    y.cls = alpha;
    y.mono = Monodromy{fr.monodromy};
    y.nondegenerate = is_nondegenerate(y.mono);
    y.residual = F.norm();
    LiftedLoop zref = reference_loop(torus, alpha);
    y.action = action(*torus_H, y, zref, torus);
    return y;
}

double rescaling_residual(const HamiltonianPtr& H, const Chart& chart,
                          const PeriodicOrbit& orbit_of_TH, int T, int steps) {
    FlowOptions fo;
    fo.steps = steps * T;
    fo.t_end = T;
    fo.store_trajectory = false;
    FlowResult fr = flow(*H, chart, orbit_of_TH.trajectory.front(), fo);
    Vec F = pack(fr.end) - pack(orbit_of_TH.trajectory.front()) -
            class_displacement(chart, orbit_of_TH.cls);
    return F.norm();
}

}  // namespace hamcap
