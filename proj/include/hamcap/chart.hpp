#pragma once

#include <Eigen/Core>
#include <vector>

#include "hamcap/errors.hpp"

namespace hamcap {

// Charts have at most 4 (q,p) pairs, so phase vectors fit in fixed-capacity
// storage and the integrator inner loops never touch the heap.
constexpr int kMaxPairs = 4;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor,
                          2 * kMaxPairs, 1>;
using IVec = Eigen::Matrix<int, Eigen::Dynamic, 1, Eigen::ColMajor,
                           2 * kMaxPairs, 1>;

enum class ChartKind { Annulus, Torus2, Strip, ProductTorus };

// A charted surface with symplectic form dp ^ dq (summed over pairs).
// q coordinates always live on unit circles; p is [0,W] on the annulus,
// R (optionally bounded) on the strip, and a unit circle on torus charts.
struct Chart {
    ChartKind kind = ChartKind::Annulus;
    double width = 1.0;   // Annulus only
    double bound = 0.0;   // Strip only; 0 means unbounded
    int pairs = 1;        // number of (q,p) pairs

    static Chart annulus(double W);
    static Chart torus2();
    static Chart strip(double half_width = 0.0);
    static Chart product_torus(int n);

    int dim() const { return pairs; }           // degrees of freedom
    int phase_dim() const { return 2 * pairs; } // dimension of phase space
    bool p_periodic() const {
        return kind == ChartKind::Torus2 || kind == ChartKind::ProductTorus;
    }
    // number of periodic coordinates = length of winding vectors
    int winding_size() const { return p_periodic() ? 2 * pairs : pairs; }

    // p-range the flow may use before LeftChart fires (annulus charts are
    // padded by W/4 on both sides so the widened bands of the squeezing
    // construction stay legal).
    double flow_p_min() const;
    double flow_p_max() const;
};

// Point in the universal cover: q entries are lifts of circle coordinates,
// p entries are lifts too on torus charts.
struct PhasePoint {
    Vec q;
    Vec p;

    PhasePoint() = default;
    PhasePoint(Vec q_, Vec p_) : q(std::move(q_)), p(std::move(p_)) {}
    static PhasePoint zero(int pairs) {
        return {Vec::Zero(pairs), Vec::Zero(pairs)};
    }
    static PhasePoint make1(double q, double p) {
        PhasePoint x;
        x.q = Vec::Constant(1, q);
        x.p = Vec::Constant(1, p);
        return x;
    }
};

// Free homotopy class as a winding vector: one entry per periodic
// coordinate, q windings first, then p windings on torus charts.
struct HomotopyClass {
    IVec winding;

    HomotopyClass() = default;
    explicit HomotopyClass(IVec w) : winding(std::move(w)) {}
    static HomotopyClass single(int w) {
        IVec v(1);
        v << w;
        return HomotopyClass(v);
    }
    bool is_zero() const { return winding.size() == 0 || winding.isZero(); }
    bool operator==(const HomotopyClass& o) const {
        return winding.size() == o.winding.size() && winding == o.winding;
    }
};

// A sampled loop in the universal cover over one period.
struct LiftedLoop {
    std::vector<double> times;       // increasing, from 0 to 1
    std::vector<PhasePoint> points;  // lifted samples
};

// Reference loop at p = 0 in the prescribed class; its p dq integral is 0.
LiftedLoop reference_loop(const Chart& chart, const HomotopyClass& cls,
                          int samples = 256);

// Integer lift displacement of a sampled loop.  Throws NonContinuousLoop if
// adjacent samples jump by >= 0.5 in any coordinate.
HomotopyClass winding_class(const Chart& chart,
                            const std::vector<PhasePoint>& points);

// Area of the band between the p-level loops {p=p0} and {p=p1} under
// dp ^ dq on a unit-circumference chart; least positive value on the torus.
double annulus_area(const Chart& chart, double p0, double p1);

// Wrap periodic coordinates into [0,1).
PhasePoint project(const Chart& chart, const PhasePoint& x);

// Lift of project(x) whose periodic coordinates are nearest to base.
PhasePoint lift_near(const Chart& chart, const PhasePoint& x,
                     const PhasePoint& base);

// Canonical representative used for ordering and dedupe: periodic
// coordinates wrapped into [0,1).
PhasePoint canonical_rep(const Chart& chart, const PhasePoint& x);

}  // namespace hamcap
