#pragma once

#include <functional>
#include <utility>

#include "hamcap/errors.hpp"

namespace hamcap {

// Scalar profile with exact first and second derivatives.
struct SmoothProfile {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;

    double operator()(double x) const { return value(x); }
};

// The step profile of the construction: 1 on (-inf,0], 0 on [1,inf),
// strictly decreasing in between, mu(x) + mu(1-x) = 1, built from
// phi(x) = exp(-1/x).
SmoothProfile mu_profile();

// Convenience evaluators for mu and its derivatives.
double mu(double x);
double mu_d1(double x);
double mu_d2(double x);

// g_{m,S,eps}(x) = (S-m) mu(|x|/eps) + m : equals S at 0, m for |x| >= eps.
SmoothProfile g_profile(double m, double S, double eps);

// f_{m,S,eps} = -g_{-S,-m,eps} : equals m at 0, S for |x| >= eps.
SmoothProfile f_profile(double m, double S, double eps);

// Quintic smoothstep on [0,1] (C^2 when extended by constants) and its
// exact antiderivative; used by the ramp constructions below.
double smoothstep5(double x);
double smoothstep5_d1(double x);
double smoothstep5_antideriv(double x);  // integral from 0 to x

// Indicator of [a,b] with smoothstep shoulders of the given width:
// exactly 1 on [a,b], 0 outside [a-corner, b+corner].
SmoothProfile plateau_indicator(double a, double b, double corner);

// Monotone ramp lambda(p) = scale * integral_p^{b+corner} plateau(u) du:
// constant plateaus at both ends, exact slope -scale on [a,b].
SmoothProfile ramp_from_plateau(double a, double b, double corner,
                                double scale);

// Rising step: 0 for x <= x0, 1 for x >= x1, quintic in between.
SmoothProfile smoothstep_rise(double x0, double x1);

// Pointwise product with exact derivatives.
SmoothProfile profile_product(SmoothProfile a, SmoothProfile b);

}  // namespace hamcap
