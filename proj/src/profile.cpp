#include "hamcap/profile.hpp"

#include <cmath>

namespace hamcap {

namespace {

double phi(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

double phi_d1(double x) {
    if (x <= 0) return 0.0;
    return std::exp(-1.0 / x) / (x * x);
}

double phi_d2(double x) {
    if (x <= 0) return 0.0;
    return std::exp(-1.0 / x) * (1.0 - 2.0 * x) / (x * x * x * x);
}

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

double mu(double x) {
    if (x <= 0) return 1.0;
    if (x >= 1) return 0.0;
    double n = phi(1 - x);
    return n / (phi(x) + n);
}

double mu_d1(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    double A = phi(x), B = phi(1 - x);
    double dA = phi_d1(x), dB = -phi_d1(1 - x);
    double D = A + B;
    // mu = B/D
    return (dB * D - B * (dA + dB)) / (D * D);
}

double mu_d2(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    double A = phi(x), B = phi(1 - x);
    double dA = phi_d1(x), dB = -phi_d1(1 - x);
    double ddA = phi_d2(x), ddB = phi_d2(1 - x);
    double D = A + B, dD = dA + dB, ddD = ddA + ddB;
    double u = dB * D - B * dD;
    double du = ddB * D - B * ddD;
    return du / (D * D) - 2.0 * u * dD / (D * D * D);
}

SmoothProfile mu_profile() {
    return {[](double x) { return mu(x); }, [](double x) { return mu_d1(x); },
            [](double x) { return mu_d2(x); }};
}

SmoothProfile g_profile(double m, double S, double eps) {
    if (!(m < S)) throw BadProfileParams("g profile needs m < S");
    if (!(eps > 0)) throw BadProfileParams("g profile needs eps > 0");
    double d = S - m;
    return {[=](double x) { return d * mu(std::abs(x) / eps) + m; },
            [=](double x) { return d * mu_d1(std::abs(x) / eps) * sign_of(x) / eps; },
            [=](double x) { return d * mu_d2(std::abs(x) / eps) / (eps * eps); }};
}

SmoothProfile f_profile(double m, double S, double eps) {
    if (!(m < S)) throw BadProfileParams("f profile needs m < S");
    if (!(eps > 0)) throw BadProfileParams("f profile needs eps > 0");
    double d = S - m;
    return {[=](double x) { return S - d * mu(std::abs(x) / eps); },
            [=](double x) { return -d * mu_d1(std::abs(x) / eps) * sign_of(x) / eps; },
            [=](double x) { return -d * mu_d2(std::abs(x) / eps) / (eps * eps); }};
}

double smoothstep5(double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double smoothstep5_d1(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    double y = x * (1.0 - x);
    return 30.0 * y * y;
}

namespace {

double smoothstep5_d2(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

}  // namespace

double smoothstep5_antideriv(double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return x - 0.5;
    double x4 = x * x * x * x;
    return x4 * (2.5 + x * (-3.0 + x));
}

SmoothProfile plateau_indicator(double a, double b, double corner) {
    if (!(corner > 0) || !(a <= b))
        throw BadProfileParams("plateau needs a <= b and corner > 0");
    auto val = [=](double p) {
        if (p <= a - corner || p >= b + corner) return 0.0;
        if (p < a) return smoothstep5((p - (a - corner)) / corner);
        if (p > b) return smoothstep5(((b + corner) - p) / corner);
        return 1.0;
    };
    auto d1 = [=](double p) {
        if (p < a) return smoothstep5_d1((p - (a - corner)) / corner) / corner;
        if (p > b) return -smoothstep5_d1(((b + corner) - p) / corner) / corner;
        return 0.0;
    };
    auto d2 = [=](double p) {
        double c2 = corner * corner;
        if (p < a) return smoothstep5_d2((p - (a - corner)) / corner) / c2;
        if (p > b) return smoothstep5_d2(((b + corner) - p) / corner) / c2;
        return 0.0;
    };
    return {val, d1, d2};
}

SmoothProfile smoothstep_rise(double x0, double x1) {
    if (!(x1 > x0)) throw BadProfileParams("smoothstep_rise needs x1 > x0");
    double w = x1 - x0;
    return {[=](double x) { return smoothstep5((x - x0) / w); },
            [=](double x) { return smoothstep5_d1((x - x0) / w) / w; },
            [=](double x) { return smoothstep5_d2((x - x0) / w) / (w * w); }};
}

SmoothProfile profile_product(SmoothProfile a, SmoothProfile b) {
    return {[=](double x) { return a.value(x) * b.value(x); },
            [=](double x) { return a.d1(x) * b.value(x) + a.value(x) * b.d1(x); },
            [=](double x) {
                return a.d2(x) * b.value(x) + 2.0 * a.d1(x) * b.d1(x) +
                       a.value(x) * b.d2(x);
            }};
}

SmoothProfile ramp_from_plateau(double a, double b, double corner,
                                double scale) {
    SmoothProfile ind = plateau_indicator(a, b, corner);
    double total = (b - a) + corner;  // integral of the indicator
    // integral of the indicator from a-corner to p, in closed form
    auto accum = [=](double p) {
        if (p <= a - corner) return 0.0;
        if (p < a)
            return corner * smoothstep5_antideriv((p - (a - corner)) / corner);
        if (p <= b) return 0.5 * corner + (p - a);
        if (p < b + corner)
            return 0.5 * corner + (b - a) +
                   corner * (0.5 - smoothstep5_antideriv(((b + corner) - p) / corner));
        return total;
    };
    auto val = [=](double p) { return scale * (total - accum(p)); };
    auto d1 = [=](double p) { return -scale * ind.value(p); };
    auto d2 = [=](double p) { return -scale * ind.d1(p); };
    return {val, d1, d2};
}

}  // namespace hamcap
