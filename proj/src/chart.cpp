#include "hamcap/chart.hpp"

#include <cmath>
#include <limits>

namespace hamcap {

Chart Chart::annulus(double W) {
    if (W <= 0) throw OutOfChart("annulus width must be positive");
    Chart c;
    c.kind = ChartKind::Annulus;
    c.width = W;
    return c;
}

Chart Chart::torus2() {
    Chart c;
    c.kind = ChartKind::Torus2;
    return c;
}

Chart Chart::strip(double half_width) {
    Chart c;
    c.kind = ChartKind::Strip;
    c.bound = half_width;
    return c;
}

Chart Chart::product_torus(int n) {
    if (n < 1 || n > kMaxPairs)
        throw OutOfChart("product torus needs 1 <= n <= 4");
    Chart c;
    c.kind = ChartKind::ProductTorus;
    c.pairs = n;
    return c;
}

double Chart::flow_p_min() const {
    switch (kind) {
        case ChartKind::Annulus: return -width / 4;
        case ChartKind::Strip:
            return bound > 0 ? -bound : -std::numeric_limits<double>::infinity();
        default: return -std::numeric_limits<double>::infinity();
    }
}

double Chart::flow_p_max() const {
    switch (kind) {
        case ChartKind::Annulus: return width * 1.25;
        case ChartKind::Strip:
            return bound > 0 ? bound : std::numeric_limits<double>::infinity();
        default: return std::numeric_limits<double>::infinity();
    }
}

namespace {

double wrap01(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y -= 1.0;  // guard against floor rounding at negative tiny x
    return y;
}

}  // namespace

LiftedLoop reference_loop(const Chart& chart, const HomotopyClass& cls,
                          int samples) {
    const int n = chart.pairs;
    if (cls.winding.size() != chart.winding_size())
        throw ClassMismatch("winding vector length does not match chart");
    LiftedLoop z;
    z.times.resize(samples + 1);
    z.points.resize(samples + 1);
    for (int k = 0; k <= samples; ++k) {
        double t = static_cast<double>(k) / samples;
        PhasePoint x = PhasePoint::zero(n);
        for (int i = 0; i < n; ++i) x.q[i] = cls.winding[i] * t;
        if (chart.p_periodic())
            for (int i = 0; i < n; ++i) x.p[i] = cls.winding[n + i] * t;
        z.times[k] = t;
        z.points[k] = x;
    }
    return z;
}

HomotopyClass winding_class(const Chart& chart,
                            const std::vector<PhasePoint>& points) {
    if (points.size() < 2) throw NonContinuousLoop("loop needs >= 2 samples");
    const int n = chart.pairs;
    for (size_t k = 0; k + 1 < points.size(); ++k) {
        for (int i = 0; i < n; ++i) {
            if (std::abs(points[k + 1].q[i] - points[k].q[i]) >= 0.5)
                throw NonContinuousLoop("adjacent q jump >= 0.5");
            if (std::abs(points[k + 1].p[i] - points[k].p[i]) >= 0.5)
                throw NonContinuousLoop("adjacent p jump >= 0.5");
        }
    }
    const PhasePoint& a = points.front();
    const PhasePoint& b = points.back();
    IVec w(chart.winding_size());
    for (int i = 0; i < n; ++i) {
        double d = b.q[i] - a.q[i];
        double r = std::round(d);
        if (std::abs(d - r) >= 0.25)
            throw NonContinuousLoop("loop does not close up to integer winding");
        w[i] = static_cast<int>(r);
    }
    if (chart.p_periodic()) {
        for (int i = 0; i < n; ++i) {
            double d = b.p[i] - a.p[i];
            double r = std::round(d);
            if (std::abs(d - r) >= 0.25)
                throw NonContinuousLoop(
                    "loop does not close up to integer winding in p");
            w[n + i] = static_cast<int>(r);
        }
    }
    return HomotopyClass(w);
}

double annulus_area(const Chart& chart, double p0, double p1) {
    switch (chart.kind) {
        case ChartKind::Annulus:
            if (p0 < 0 || p0 > chart.width || p1 < 0 || p1 > chart.width)
                throw OutOfChart("p level outside [0, W]");
            return p1 - p0;
        case ChartKind::Torus2: {
            if (p0 < 0 || p0 >= 1 || p1 < 0 || p1 >= 1)
                throw OutOfChart("p level outside [0, 1)");
            if (p0 == p1) return 0.0;
            return wrap01(p1 - p0);  // least positive band area
        }
        case ChartKind::Strip:
            if (chart.bound > 0 &&
                (std::abs(p0) > chart.bound || std::abs(p1) > chart.bound))
                throw OutOfChart("p level outside strip bound");
            return p1 - p0;
        default:
            throw OutOfChart("annulus_area needs a 2-dimensional chart");
    }
}

PhasePoint project(const Chart& chart, const PhasePoint& x) {
    PhasePoint y = x;
    for (int i = 0; i < chart.pairs; ++i) y.q[i] = wrap01(x.q[i]);
    if (chart.p_periodic())
        for (int i = 0; i < chart.pairs; ++i) y.p[i] = wrap01(x.p[i]);
    return y;
}

PhasePoint lift_near(const Chart& chart, const PhasePoint& x,
                     const PhasePoint& base) {
    PhasePoint y = project(chart, x);
    for (int i = 0; i < chart.pairs; ++i)
        y.q[i] += std::round(base.q[i] - y.q[i]);
    if (chart.p_periodic())
        for (int i = 0; i < chart.pairs; ++i)
            y.p[i] += std::round(base.p[i] - y.p[i]);
    return y;
}

PhasePoint canonical_rep(const Chart& chart, const PhasePoint& x) {
    return project(chart, x);
}

}  // namespace hamcap
