#include "hamcap/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hamcap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_half(double x) {
    // representative of x in [-1/2, 1/2)
    double y = x - std::round(x);
    if (y >= 0.5) y -= 1.0;
    return y;
}

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

SupportBox unit_box(int pairs) {
    SupportBox s;
    s.p_lo = Vec::Zero(pairs);
    s.p_hi = Vec::Ones(pairs);
    return s;
}

class ProfileHamiltonianImpl final : public Hamiltonian {
public:
    ProfileHamiltonianImpl(SmoothProfile h, int pairs, int coord, double center,
                           bool wrap, double lo, double hi)
        : h_(std::move(h)), n_(pairs), i_(coord), center_(center), wrap_(wrap),
          lo_(lo), hi_(hi) {}

    double value(double, const PhasePoint& x) const override {
        return h_.value(arg(x));
    }
    PhaseGradient gradient(double, const PhasePoint& x) const override {
        PhaseGradient g{Vec::Zero(n_), Vec::Zero(n_)};
        g.dp[i_] = h_.d1(arg(x));
        return g;
    }
    Mat hessian(double, const PhasePoint& x) const override {
        Mat H = Mat::Zero(2 * n_, 2 * n_);
        H(n_ + i_, n_ + i_) = h_.d2(arg(x));
        return H;
    }
    int pairs() const override { return n_; }
    SupportBox support() const override {
        SupportBox s = unit_box(n_);
        s.p_lo[i_] = center_ + lo_;
        s.p_hi[i_] = center_ + hi_;
        return s;
    }

private:
    double arg(const PhasePoint& x) const {
        double u = x.p[i_] - center_;
        return wrap_ ? wrap_half(u) : u;
    }
    SmoothProfile h_;
    int n_, i_;
    double center_;
    bool wrap_;
    double lo_, hi_;
};

class ConstantHamiltonianImpl final : public Hamiltonian {
public:
    ConstantHamiltonianImpl(double c, int pairs) : c_(c), n_(pairs) {}
    double value(double, const PhasePoint&) const override { return c_; }
    PhaseGradient gradient(double, const PhasePoint&) const override {
        return {Vec::Zero(n_), Vec::Zero(n_)};
    }
    Mat hessian(double, const PhasePoint&) const override {
        return Mat::Zero(2 * n_, 2 * n_);
    }
    int pairs() const override { return n_; }
    SupportBox support() const override { return unit_box(n_); }

private:
    double c_;
    int n_;
};

class SumHamiltonianImpl final : public Hamiltonian {
public:
    explicit SumHamiltonianImpl(std::vector<HamiltonianPtr> terms)
        : terms_(std::move(terms)) {
        if (terms_.empty()) throw ConfigError("sum of zero Hamiltonians");
        n_ = terms_.front()->pairs();
        for (const auto& t : terms_)
            if (t->pairs() != n_)
                throw ConfigError("sum terms live on different charts");
    }
    double value(double t, const PhasePoint& x) const override {
        double v = 0;
        for (const auto& h : terms_) v += h->value(t, x);
        return v;
    }
    PhaseGradient gradient(double t, const PhasePoint& x) const override {
        PhaseGradient g{Vec::Zero(n_), Vec::Zero(n_)};
        for (const auto& h : terms_) {
            PhaseGradient gi = h->gradient(t, x);
            g.dq += gi.dq;
            g.dp += gi.dp;
        }
        return g;
    }
    Mat hessian(double t, const PhasePoint& x) const override {
        Mat H = Mat::Zero(2 * n_, 2 * n_);
        for (const auto& h : terms_) H += h->hessian(t, x);
        return H;
    }
    int pairs() const override { return n_; }
    bool time_dependent() const override {
        return std::any_of(terms_.begin(), terms_.end(),
                           [](const auto& h) { return h->time_dependent(); });
    }
    SupportBox support() const override {
        SupportBox s = terms_.front()->support();
        for (const auto& h : terms_) {
            SupportBox si = h->support();
            s.p_lo = s.p_lo.cwiseMin(si.p_lo);
            s.p_hi = s.p_hi.cwiseMax(si.p_hi);
        }
        return s;
    }

private:
    std::vector<HamiltonianPtr> terms_;
    int n_;
};

class CosProductHamiltonianImpl final : public Hamiltonian {
public:
    CosProductHamiltonianImpl(double amp, double offset, double cos_coef,
                              int freq, double phase, SmoothProfile bump,
                              int pairs, int qcoord, int pcoord, double center,
                              bool wrap)
        : amp_(amp), off_(offset), cc_(cos_coef), freq_(freq), phase_(phase),
          bump_(std::move(bump)), n_(pairs), j_(qcoord), i_(pcoord),
          center_(center), wrap_(wrap) {}

    double value(double, const PhasePoint& x) const override {
        return factor(x) * bump_.value(arg(x));
    }
    PhaseGradient gradient(double, const PhasePoint& x) const override {
        PhaseGradient g{Vec::Zero(n_), Vec::Zero(n_)};
        double u = arg(x);
        g.dq[j_] = dfactor(x) * bump_.value(u);
        g.dp[i_] = factor(x) * bump_.d1(u);
        return g;
    }
    Mat hessian(double, const PhasePoint& x) const override {
        Mat H = Mat::Zero(2 * n_, 2 * n_);
        double u = arg(x);
        H(j_, j_) = ddfactor(x) * bump_.value(u);
        H(j_, n_ + i_) = H(n_ + i_, j_) = dfactor(x) * bump_.d1(u);
        H(n_ + i_, n_ + i_) = factor(x) * bump_.d2(u);
        return H;
    }
    int pairs() const override { return n_; }
    SupportBox support() const override {
        SupportBox s = unit_box(n_);
        s.p_lo[i_] = center_ - 0.5;
        s.p_hi[i_] = center_ + 0.5;
        return s;
    }

private:
    double theta(const PhasePoint& x) const {
        return kTwoPi * (freq_ * x.q[j_] + phase_);
    }
    double factor(const PhasePoint& x) const {
        return amp_ * (off_ + cc_ * std::cos(theta(x)));
    }
    double dfactor(const PhasePoint& x) const {
        return -amp_ * cc_ * std::sin(theta(x)) * kTwoPi * freq_;
    }
    double ddfactor(const PhasePoint& x) const {
        return -amp_ * cc_ * std::cos(theta(x)) * kTwoPi * freq_ * kTwoPi * freq_;
    }
    double arg(const PhasePoint& x) const {
        double u = x.p[i_] - center_;
        return wrap_ ? wrap_half(u) : u;
    }
    double amp_, off_, cc_;
    int freq_;
    double phase_;
    SmoothProfile bump_;
    int n_, j_, i_;
    double center_;
    bool wrap_;
};

// G^k = nu^k(p) * H(q,p) on the covering strip, nu^k(p) = mu(|p| - k).
class GkHamiltonianImpl final : public Hamiltonian {
public:
    GkHamiltonianImpl(HamiltonianPtr base, int k)
        : base_(std::move(base)), k_(k) {
        if (base_->pairs() != 1)
            throw ConfigError("G^k needs a torus Hamiltonian with one pair");
        if (k_ < 1) throw ConfigError("G^k needs k >= 1");
    }
    double value(double t, const PhasePoint& x) const override {
        return nu(x.p[0]) * base_->value(t, x);
    }
    PhaseGradient gradient(double t, const PhasePoint& x) const override {
        double p = x.p[0];
        double v = nu(p), dv = dnu(p);
        PhaseGradient gb = base_->gradient(t, x);
        PhaseGradient g{Vec::Zero(1), Vec::Zero(1)};
        g.dq[0] = v * gb.dq[0];
        g.dp[0] = dv * base_->value(t, x) + v * gb.dp[0];
        return g;
    }
    Mat hessian(double t, const PhasePoint& x) const override {
        double p = x.p[0];
        double v = nu(p), dv = dnu(p), ddv = ddnu(p);
        double B = base_->value(t, x);
        PhaseGradient gb = base_->gradient(t, x);
        Mat Hb = base_->hessian(t, x);
        Mat H(2, 2);
        H(0, 0) = v * Hb(0, 0);
        H(0, 1) = dv * gb.dq[0] + v * Hb(0, 1);
        H(1, 0) = H(0, 1);
        H(1, 1) = ddv * B + 2.0 * dv * gb.dp[0] + v * Hb(1, 1);
        return H;
    }
    int pairs() const override { return 1; }
    bool time_dependent() const override { return base_->time_dependent(); }
    SupportBox support() const override {
        SupportBox s;
        s.p_lo = Vec::Constant(1, -(k_ + 1.0));
        s.p_hi = Vec::Constant(1, k_ + 1.0);
        return s;
    }

private:
    double nu(double p) const { return mu(std::abs(p) - k_); }
    double dnu(double p) const { return mu_d1(std::abs(p) - k_) * sign_of(p); }
    double ddnu(double p) const { return mu_d2(std::abs(p) - k_); }
    HamiltonianPtr base_;
    int k_;
};

// H = k * (1 - mu(|u|/s)), u the wrapped value of (p-w).beta, s = eps*|beta|.
class LagrangianHamiltonianImpl final : public Hamiltonian {
public:
    LagrangianHamiltonianImpl(int n, Vec w, IVec beta, int k, double eps)
        : n_(n), w_(std::move(w)), beta_(std::move(beta)), k_(k), eps_(eps) {
        betad_ = beta_.cast<double>();
        bnorm_ = betad_.norm();
        s_ = eps_ * bnorm_;
    }
    double value(double, const PhasePoint& x) const override {
        return k_ * (1.0 - mu(std::abs(u(x)) / s_));
    }
    PhaseGradient gradient(double, const PhasePoint& x) const override {
        PhaseGradient g{Vec::Zero(n_), Vec::Zero(n_)};
        double uu = u(x);
        g.dp = -k_ * mu_d1(std::abs(uu) / s_) * sign_of(uu) / s_ * betad_;
        return g;
    }
    Mat hessian(double, const PhasePoint& x) const override {
        Mat H = Mat::Zero(2 * n_, 2 * n_);
        double uu = u(x);
        double c = -k_ * mu_d2(std::abs(uu) / s_) / (s_ * s_);
        H.block(n_, n_, n_, n_) = c * betad_ * betad_.transpose();
        return H;
    }
    int pairs() const override { return n_; }
    SupportBox support() const override { return unit_box(n_); }

private:
    double u(const PhasePoint& x) const {
        return wrap_half((x.p - w_).dot(betad_));
    }
    int n_;
    Vec w_;
    IVec beta_;
    Vec betad_;
    int k_;
    double eps_, bnorm_, s_;
};

class RadialHamiltonianImpl final : public Hamiltonian {
public:
    RadialHamiltonianImpl(SmoothProfile h, int n, double hi)
        : h_(std::move(h)), n_(n), hi_(hi) {}
    double value(double, const PhasePoint& x) const override {
        return h_.value(rho(x));
    }
    PhaseGradient gradient(double, const PhasePoint& x) const override {
        PhaseGradient g{Vec::Zero(n_), Vec::Zero(n_)};
        Vec u = wrapped(x);
        double r = u.norm();
        if (r > 1e-12) g.dp = h_.d1(r) / r * u;
        return g;
    }
    Mat hessian(double, const PhasePoint& x) const override {
        Mat H = Mat::Zero(2 * n_, 2 * n_);
        Vec u = wrapped(x);
        double r = u.norm();
        if (r > 1e-12) {
            Vec ur = u / r;
            double d1 = h_.d1(r), d2 = h_.d2(r);
            H.block(n_, n_, n_, n_) =
                d2 * ur * ur.transpose() +
                d1 / r * (Mat::Identity(n_, n_) - ur * ur.transpose());
        }
        return H;
    }
    int pairs() const override { return n_; }
    SupportBox support() const override { return unit_box(n_); }

private:
    Vec wrapped(const PhasePoint& x) const {
        Vec u(n_);
        for (int i = 0; i < n_; ++i) u[i] = wrap_half(x.p[i]);
        return u;
    }
    double rho(const PhasePoint& x) const { return wrapped(x).norm(); }
    SmoothProfile h_;
    int n_;
    double hi_;
};

}  // namespace

HamiltonianPtr profile_hamiltonian(SmoothProfile h, int pairs, int coord,
                                   double center, bool wrap, double support_lo,
                                   double support_hi) {
    return std::make_shared<ProfileHamiltonianImpl>(
        std::move(h), pairs, coord, center, wrap, support_lo, support_hi);
}

HamiltonianPtr constant_hamiltonian(double c, int pairs) {
    return std::make_shared<ConstantHamiltonianImpl>(c, pairs);
}

HamiltonianPtr sum_hamiltonian(std::vector<HamiltonianPtr> terms) {
    return std::make_shared<SumHamiltonianImpl>(std::move(terms));
}

HamiltonianPtr cos_product_hamiltonian(double amp, double offset,
                                       double cos_coef, int freq, double phase,
                                       SmoothProfile bump, int pairs,
                                       int qcoord, int pcoord, double center,
                                       bool wrap) {
    return std::make_shared<CosProductHamiltonianImpl>(
        amp, offset, cos_coef, freq, phase, std::move(bump), pairs, qcoord,
        pcoord, center, wrap);
}

HamiltonianPtr build_Gk(HamiltonianPtr torus_hamiltonian, int k) {
    return std::make_shared<GkHamiltonianImpl>(std::move(torus_hamiltonian), k);
}

AnnulusCounterexample counterexample_annulus(double C, double delta, int r,
                                             double tau) {
    if (!(delta > 0 && delta < C))
        throw BadProfileParams("need 0 < delta < C");
    if (r < 1) throw BadProfileParams("need r >= 1");
    if (!(tau > 0)) throw BadProfileParams("need tau > 0");
    const double R = C / r;
    // descend from C-delta to 0 at slope margin strictly above -r
    const double slope = r * (C - delta) / (C - 0.5 * delta);
    const double corner = std::min(tau / 8, delta / (8 * r));
    const double a = corner;
    const double b = a + (C - delta) / slope - corner;
    SmoothProfile fall = ramp_from_plateau(a, b, corner, slope);
    SmoothProfile rise = smoothstep_rise(-tau / 2, -tau / 4);
    SmoothProfile f = profile_product(rise, fall);

    AnnulusCounterexample out;
    out.profile = f;
    out.hamiltonian =
        profile_hamiltonian(f, 1, 0, 0.0, false, -tau / 2, b + corner);
    out.gap = f.value(0.0) - f.value(R);
    double lo = 0.0;
    const int N = 10000;
    for (int i = 0; i <= N; ++i) {
        double p = -tau + (R + tau) * i / N;
        lo = std::min(lo, f.d1(p));
    }
    out.min_slope = lo;
    return out;
}

LagrangianCounterexample counterexample_lagrangian(int n, const Vec& w, int k,
                                                   const HomotopyClass& alpha) {
    if (n < 2) throw BadProfileParams("need n >= 2");
    if (k < 1) throw BadProfileParams("need k >= 1");
    if (alpha.winding.size() != 2 * n)
        throw ClassMismatch("alpha must have 2n winding entries");
    IVec aq = alpha.winding.head(n);
    if (aq.isZero()) throw NoValidBeta("alpha has no q winding");

    // smallest integer beta with beta.w not an integer and alpha not
    // proportional to beta
    IVec best;
    long best_l1 = -1;
    const int B = 4;
    std::vector<int> idx(n, -B);
    IVec beta(n);
    bool done = false;
    while (!done) {
        for (int i = 0; i < n; ++i) beta[i] = idx[i];
        if (!beta.isZero()) {
            double bw = 0;
            for (int i = 0; i < n; ++i) bw += beta[i] * w[i];
            double frac = std::abs(wrap_half(bw));
            bool indep = false;
            for (int i = 0; i < n && !indep; ++i)
                for (int j = i + 1; j < n && !indep; ++j)
                    if (beta[i] * aq[j] - beta[j] * aq[i] != 0) indep = true;
            if (frac > 1e-9 && indep) {
                long l1 = beta.cwiseAbs().sum();
                bool better = best_l1 < 0 || l1 < best_l1;
                if (!better && l1 == best_l1)
                    better = std::lexicographical_compare(
                        beta.data(), beta.data() + n, best.data(), best.data() + n);
                if (better) {
                    best = beta;
                    best_l1 = l1;
                }
            }
        }
        int i = 0;
        while (i < n && ++idx[i] > B) idx[i++] = -B;
        done = (i == n);
    }
    if (best_l1 < 0)
        throw NoValidBeta("no integer beta with beta.w nonintegral and "
                          "alpha independent of beta");

    Vec bd = best.cast<double>();
    double d0 = std::abs(wrap_half(w.dot(bd))) / bd.norm();
    double eps = d0 / 2;

    LagrangianCounterexample out;
    out.beta = best;
    out.d0 = d0;
    out.gap = k;
    out.hamiltonian =
        std::make_shared<LagrangianHamiltonianImpl>(n, w, best, k, eps);
    return out;
}

HamiltonianPtr radial_profile_hamiltonian(SmoothProfile h, int pairs,
                                          double support_hi) {
    return std::make_shared<RadialHamiltonianImpl>(std::move(h), pairs,
                                                   support_hi);
}

namespace {

template <typename F>
void grid_extrema(const Hamiltonian& H, const Vec& q_lo, const Vec& q_hi,
                  const Vec& p_lo, const Vec& p_hi, int n_per_axis, F&& visit) {
    const int n = H.pairs();
    const int N = n_per_axis;
    std::vector<int> idx(2 * n, 0);
    PhasePoint x = PhasePoint::zero(n);
    bool done = false;
    while (!done) {
        for (int i = 0; i < n; ++i) {
            x.q[i] = q_lo[i] + (q_hi[i] - q_lo[i]) * idx[i] / (N - 1);
            x.p[i] = p_lo[i] + (p_hi[i] - p_lo[i]) * idx[n + i] / (N - 1);
        }
        visit(H.value(0.0, x));
        int i = 0;
        while (i < 2 * n && ++idx[i] == N) idx[i++] = 0;
        done = (i == 2 * n);
    }
}

}  // namespace

double grid_sup(const Hamiltonian& H, const Vec& q_lo, const Vec& q_hi,
                const Vec& p_lo, const Vec& p_hi, int n_per_axis) {
    double s = -std::numeric_limits<double>::infinity();
    grid_extrema(H, q_lo, q_hi, p_lo, p_hi, n_per_axis,
                 [&](double v) { s = std::max(s, v); });
    return s;
}

double grid_inf(const Hamiltonian& H, const Vec& q_lo, const Vec& q_hi,
                const Vec& p_lo, const Vec& p_hi, int n_per_axis) {
    double s = std::numeric_limits<double>::infinity();
    grid_extrema(H, q_lo, q_hi, p_lo, p_hi, n_per_axis,
                 [&](double v) { s = std::min(s, v); });
    return s;
}

}  // namespace hamcap
