#include "hamcap/json_io.hpp"

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hamcap {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

SmoothProfile profile_from_json(const json& j) {
    const std::string kind = j.at("kind");
    double m = j.at("m"), S = j.at("S"), eps = j.at("eps");
    if (kind == "g") return g_profile(m, S, eps);
    if (kind == "f") return f_profile(m, S, eps);
    throw ConfigError("profile kind must be g or f");
}

}  // namespace

json chart_to_json(const Chart& chart) {
    switch (chart.kind) {
        case ChartKind::Annulus:
            return {{"kind", "annulus"}, {"width", chart.width}};
        case ChartKind::Torus2:
            return {{"kind", "torus2"}};
        case ChartKind::Strip:
            return {{"kind", "strip"}, {"bound", chart.bound}};
        default:
            return {{"kind", "product_torus"}, {"n", chart.pairs}};
    }
}

Chart chart_from_json(const json& j) {
    const std::string kind = j.at("kind");
    if (kind == "annulus") return Chart::annulus(j.value("width", 1.0));
    if (kind == "torus2") return Chart::torus2();
    if (kind == "strip") return Chart::strip(j.value("bound", 0.0));
    if (kind == "product_torus") return Chart::product_torus(j.at("n"));
    throw ConfigError("unknown chart kind: " + kind);
}

HamiltonianPtr hamiltonian_from_json(const json& j) {
    const std::string kind = j.at("kind");
    if (kind == "g" || kind == "f") {
        double m = j.at("m"), S = j.at("S"), eps = j.at("eps");
        int pairs = j.value("pairs", 1);
        int coord = j.value("coord", 0);
        double center = j.value("center", 0.0);
        bool wrap = j.value("wrap", false);
        SmoothProfile h = kind == "g" ? g_profile(m, S, eps)
                                      : f_profile(m, S, eps);
        double lo = wrap ? -0.5 : -(eps + 0.5);
        double hi = wrap ? 0.5 : eps + 0.5;
        return profile_hamiltonian(h, pairs, coord, center, wrap, lo, hi);
    }
    if (kind == "sum") {
        std::vector<HamiltonianPtr> terms;
        for (const auto& t : j.at("terms"))
            terms.push_back(hamiltonian_from_json(t));
        return sum_hamiltonian(std::move(terms));
    }
    if (kind == "product_with_cos") {
        SmoothProfile bump = profile_from_json(j.at("bump"));
        return cos_product_hamiltonian(
            j.at("amplitude"), j.value("offset", 1.0), j.value("cos_coef", -1.0),
            j.value("freq", 1), j.value("phase", 0.0), bump,
            j.value("pairs", 1), j.value("qcoord", 0), j.value("pcoord", 0),
            j.value("center", 0.0), j.value("wrap", false));
    }
    if (kind == "gk") {
        return build_Gk(hamiltonian_from_json(j.at("base")), j.at("k"));
    }
    if (kind == "counterexample_annulus") {
        return counterexample_annulus(j.at("C"), j.at("delta"), j.at("r"),
                                      j.at("tau"))
            .hamiltonian;
    }
    if (kind == "counterexample_lagrangian") {
        int n = j.at("n");
        Vec w(n);
        for (int i = 0; i < n; ++i) w[i] = j.at("w").at(i).get<double>();
        IVec a(2 * n);
        for (int i = 0; i < 2 * n; ++i) a[i] = j.at("alpha").at(i).get<int>();
        return counterexample_lagrangian(n, w, j.at("k"), HomotopyClass(a))
            .hamiltonian;
    }
    throw ConfigError("unknown Hamiltonian kind: " + kind);
}

namespace {

json echo_profile(const json& j) {
    return {{"kind", j.at("kind")}, {"m", j.at("m").get<double>()},
            {"S", j.at("S").get<double>()}, {"eps", j.at("eps").get<double>()}};
}

}  // namespace

json preset_echo(const json& j) {
    const std::string kind = j.at("kind");
    if (kind == "g" || kind == "f") {
        json e = echo_profile(j);
        e["pairs"] = j.value("pairs", 1);
        e["coord"] = j.value("coord", 0);
        e["center"] = j.value("center", 0.0);
        e["wrap"] = j.value("wrap", false);
        return e;
    }
    if (kind == "sum") {
        json terms = json::array();
        for (const auto& t : j.at("terms")) terms.push_back(preset_echo(t));
        return {{"kind", "sum"}, {"terms", terms}};
    }
    if (kind == "product_with_cos") {
        return {{"kind", kind},
                {"amplitude", j.at("amplitude").get<double>()},
                {"offset", j.value("offset", 1.0)},
                {"cos_coef", j.value("cos_coef", -1.0)},
                {"freq", j.value("freq", 1)},
                {"phase", j.value("phase", 0.0)},
                {"pairs", j.value("pairs", 1)},
                {"qcoord", j.value("qcoord", 0)},
                {"pcoord", j.value("pcoord", 0)},
                {"center", j.value("center", 0.0)},
                {"wrap", j.value("wrap", false)},
                {"bump", echo_profile(j.at("bump"))}};
    }
    if (kind == "gk")
        return {{"kind", "gk"}, {"k", j.at("k").get<int>()},
                {"base", preset_echo(j.at("base"))}};
    if (kind == "counterexample_annulus")
        return {{"kind", kind}, {"C", j.at("C").get<double>()},
                {"delta", j.at("delta").get<double>()},
                {"r", j.at("r").get<int>()},
                {"tau", j.at("tau").get<double>()}};
    if (kind == "counterexample_lagrangian")
        return {{"kind", kind}, {"n", j.at("n").get<int>()},
                {"w", j.at("w")}, {"k", j.at("k").get<int>()},
                {"alpha", j.at("alpha")}};
    throw ConfigError("unknown Hamiltonian kind: " + kind);
}

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    if (j.contains("chart")) cfg.chart = chart_from_json(j.at("chart"));
    if (j.contains("hamiltonian")) cfg.hamiltonian = j.at("hamiltonian");
    if (j.contains("class")) {
        const auto& a = j.at("class");
        IVec w(a.size());
        for (size_t i = 0; i < a.size(); ++i) w[static_cast<int>(i)] = a[i];
        cfg.cls = HomotopyClass(w);
    }
    cfg.grid = j.value("grid", 64);
    cfg.grid_p = j.value("grid_p", 0);
    cfg.steps = j.value("steps", 2048);
    cfg.tol = j.value("tol", 1e-9);
    cfg.threads = j.value("threads", 0);
    cfg.seed = j.value("seed", 0u);
    cfg.out = j.value("out", std::string("out"));
    cfg.preset = j.value("preset", std::string());
    if (j.contains("squeeze")) {
        cfg.has_squeeze = true;
        const auto& s = j.at("squeeze");
        cfg.r = s.value("r", 1);
        cfg.R = s.value("R", 0.6);
        cfg.tau = s.value("tau", -1.0);
    }
    if (j.contains("capacity")) {
        cfg.has_capacity = true;
        const auto& c = j.at("capacity");
        cfg.family = c.value("family", std::string("annulus"));
        cfg.R = c.value("R", cfg.R);
        cfg.c_lo = c.value("c_lo", 0.0);
        cfg.c_hi = c.value("c_hi", 0.0);
        cfg.c_tol = c.value("tol", 0.008);
        if (c.contains("w")) {
            const auto& wv = c.at("w");
            cfg.w.resize(wv.size());
            for (size_t i = 0; i < wv.size(); ++i)
                cfg.w[static_cast<int>(i)] = wv[i];
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json j;
    in >> j;
    return config_from_json(j);
}

namespace {

json point_json(const PhasePoint& x) {
    json q = json::array(), p = json::array();
    for (int i = 0; i < x.q.size(); ++i) q.push_back(x.q[i]);
    for (int i = 0; i < x.p.size(); ++i) p.push_back(x.p[i]);
    return {{"q", q}, {"p", p}};
}

json floquet_json(const Mat& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(M));
    std::vector<std::pair<double, double>> ev;
    for (int i = 0; i < M.rows(); ++i)
        ev.emplace_back(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    std::sort(ev.begin(), ev.end());
    json out = json::array();
    for (auto& [re, im] : ev) out.push_back({{"re", re}, {"im", im}});
    return out;
}

}  // namespace

json orbits_to_json(const OrbitSearchResult& res, const Chart& chart,
                    int max_samples) {
    json out;
    out["chart"] = chart_to_json(chart);
    out["seeds"] = res.seeds;
    out["converged"] = res.converged;
    out["complete"] = res.complete;
    json orbits = json::array();
    for (const auto& o : res.orbits) {
        json jo;
        json cls = json::array();
        for (int i = 0; i < o.cls.winding.size(); ++i)
            cls.push_back(o.cls.winding[i]);
        jo["class"] = cls;
        jo["action"] = o.action;
        jo["residual"] = o.residual;
        jo["nondegenerate"] = o.nondegenerate;
        jo["family"] = o.family_id;
        jo["floquet"] = floquet_json(o.mono.matrix);
        const auto& pts = o.trajectory.points;
        int stride = std::max<int>(1, (static_cast<int>(pts.size()) - 1) /
                                          max_samples);
        json samples = json::array();
        for (size_t k = 0; k < pts.size(); k += stride)
            samples.push_back(point_json(pts[k]));
        if ((pts.size() - 1) % stride != 0)
            samples.push_back(point_json(pts.back()));
        jo["samples"] = samples;
        orbits.push_back(jo);
    }
    out["orbits"] = orbits;
    json fams = json::array();
    for (const auto& f : res.families) {
        json jf;
        jf["representative"] = f.representative;
        jf["p_level"] = f.p_level;
        jf["size"] = f.members.size();
        fams.push_back(jf);
    }
    out["families"] = fams;
    return out;
}

std::string orbits_to_csv(const OrbitSearchResult& res, const Chart& chart) {
    std::ostringstream os;
    const int n = chart.pairs;
    os << "index,family";
    for (int i = 0; i < n; ++i) os << ",q" << i;
    for (int i = 0; i < n; ++i) os << ",p" << i;
    os << ",action,residual,nondegenerate\n";
    for (size_t k = 0; k < res.orbits.size(); ++k) {
        const auto& o = res.orbits[k];
        const PhasePoint& x = o.trajectory.front();
        os << k << "," << o.family_id;
        for (int i = 0; i < n; ++i) os << "," << fmt17(x.q[i]);
        for (int i = 0; i < n; ++i) os << "," << fmt17(x.p[i]);
        os << "," << fmt17(o.action) << "," << fmt17(o.residual) << ","
           << (o.nondegenerate ? 1 : 0) << "\n";
    }
    return os.str();
}

json capacity_to_json(const CapacityEstimate& est, const Chart& chart) {
    json out;
    out["lower"] = est.lower;
    out["upper"] = est.upper;
    out["tol"] = est.tol;
    out["grid_density"] = {{"q", est.grid_q}, {"p", est.grid_p}};
    json wit = json::array();
    for (const auto& o : est.witnesses) {
        json jo;
        jo["p0"] = o.trajectory.front().p[0];
        jo["q0"] = o.trajectory.front().q[0];
        jo["action"] = o.action;
        jo["residual"] = o.residual;
        jo["family"] = o.family_id;
        wit.push_back(jo);
    }
    out["witnesses"] = wit;
    json certs = json::array();
    for (const auto& lg : est.log) {
        json jc;
        jc["c"] = lg.c;
        jc["found"] = lg.found;
        jc["seeds"] = lg.seeds;
        jc["kind"] = lg.found ? "witness"
                              : (lg.analytic_certificate ? "analytic+empirical"
                                                         : "empirical");
        certs.push_back(jc);
    }
    out["certificates"] = certs;
    return out;
}

std::string trajectory_to_csv(const Trajectory& traj, const Hamiltonian& H) {
    std::ostringstream os;
    const int n = H.pairs();
    os << "t";
    for (int i = 0; i < n; ++i) os << ",q" << i;
    for (int i = 0; i < n; ++i) os << ",p" << i;
    os << ",H\n";
    for (size_t k = 0; k < traj.points.size(); ++k) {
        os << fmt17(traj.times[k]);
        const PhasePoint& x = traj.points[k];
        for (int i = 0; i < n; ++i) os << "," << fmt17(x.q[i]);
        for (int i = 0; i < n; ++i) os << "," << fmt17(x.p[i]);
        os << "," << fmt17(H.value(traj.times[k], x)) << "\n";
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

}  // namespace hamcap
