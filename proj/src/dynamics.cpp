#include "hamcap/dynamics.hpp"

#include <cmath>

namespace hamcap {

TangentVector vector_field(const Hamiltonian& H, double t,
                           const PhasePoint& x) {
    PhaseGradient g = H.gradient(t, x);
    return {g.dp, -g.dq};
}

namespace {

// A = D X_H = S * Hess(H) with S the standard symplectic structure.
Mat linearization(const Hamiltonian& H, double t, const PhasePoint& x) {
    const int n = H.pairs();
    Mat Hs = H.hessian(t, x);
    Mat A(2 * n, 2 * n);
    A.topRows(n) = Hs.bottomRows(n);     // (H_pq, H_pp)
    A.bottomRows(n) = -Hs.topRows(n);    // (-H_qq, -H_qp)
    return A;
}

Vec pack(const PhasePoint& x) {
    Vec z(x.q.size() + x.p.size());
    z << x.q, x.p;
    return z;
}

PhasePoint unpack(const Vec& z, int n) {
    return {z.head(n), z.tail(n)};
}

}  // namespace

FlowResult flow(const Hamiltonian& H, const Chart& chart, const PhasePoint& x0,
                const FlowOptions& opt) {
    const int n = H.pairs();
    if (chart.pairs != n)
        throw ConfigError("chart and Hamiltonian dimensions differ");
    if (opt.steps < 16) throw ConfigError("flow needs at least 16 steps");

    const double h = opt.t_end / opt.steps;
    const double p_lo = chart.flow_p_min();
    const double p_hi = chart.flow_p_max();
    const Mat I = Mat::Identity(2 * n, 2 * n);

    FlowResult out;
    out.trajectory.h = h;
    if (opt.store_trajectory) {
        out.trajectory.times.reserve(opt.steps + 1);
        out.trajectory.points.reserve(opt.steps + 1);
        out.trajectory.times.push_back(0.0);
        out.trajectory.points.push_back(x0);
    }

    Mat M;
    const bool with_m = opt.want_monodromy || opt.want_monodromy_path;
    if (with_m) M = I;
    if (opt.want_monodromy_path) out.monodromy_path.push_back(M);

    Vec z = pack(x0);
    for (int k = 0; k < opt.steps; ++k) {
        const double t_mid = k * h + 0.5 * h;
        // solve y = z + h * X(t_mid, (z+y)/2)
        PhasePoint xm = unpack(z, n);
        TangentVector f = vector_field(H, t_mid, xm);
        Vec fz(2 * n);
        fz << f.dq, f.dp;
        Vec y = z + h * fz;  // Euler predictor
        bool ok = false;
        double res_norm = 0.0;
        Vec mid;
        for (int it = 0; it < opt.newton_max; ++it) {
            mid = 0.5 * (z + y);
            PhasePoint xmid = unpack(mid, n);
            TangentVector fm = vector_field(H, t_mid, xmid);
            Vec fv(2 * n);
            fv << fm.dq, fm.dp;
            Vec r = y - z - h * fv;
            res_norm = r.norm();
            if (!std::isfinite(res_norm))
                throw NewtonDivergence(t_mid, res_norm,
                                       "implicit step produced non-finite state");
            if (res_norm < opt.newton_tol) {
                ok = true;
                break;
            }
            Mat J = I - 0.5 * h * linearization(H, t_mid, xmid);
            y += J.partialPivLu().solve(-r);
        }
        if (!ok)
            throw NewtonDivergence(k * h, res_norm,
                                   "implicit midpoint Newton did not converge");
        if (with_m) {
            Mat A = linearization(H, t_mid, unpack(Vec(0.5 * (z + y)), n));
            Mat L = I - 0.5 * h * A;
            Mat R = I + 0.5 * h * A;
            M = L.partialPivLu().solve(R * M);
            if (opt.want_monodromy_path) out.monodromy_path.push_back(M);
        }
        z = y;
        PhasePoint xk = unpack(z, n);
        for (int i = 0; i < n; ++i) {
            if (xk.p[i] < p_lo || xk.p[i] > p_hi)
                throw LeftChart((k + 1) * h, xk.p[i],
                                "trajectory left the chart p-range");
        }
        if (opt.store_trajectory) {
            out.trajectory.times.push_back((k + 1) * h);
            out.trajectory.points.push_back(xk);
        }
        if (k + 1 == opt.steps) out.end = xk;
    }
    if (with_m) out.monodromy = M;
    return out;
}

Monodromy monodromy(const Hamiltonian& H, const Chart& chart,
                    const Trajectory& orbit) {
    FlowOptions opt;
    opt.steps = static_cast<int>(orbit.points.size()) - 1;
    opt.t_end = orbit.times.back();
    opt.want_monodromy = true;
    FlowResult r = flow(H, chart, orbit.front(), opt);
    return Monodromy{r.monodromy};
}

bool is_nondegenerate(const Monodromy& m, double tol) {
    const Mat& M = m.matrix;
    Mat D = M - Mat::Identity(M.rows(), M.cols());
    return std::abs(D.determinant()) > tol;
}

double symplectic_product(const TangentVector& u, const TangentVector& v) {
    return u.dp.dot(v.dq) - v.dp.dot(u.dq);
}

}  // namespace hamcap
