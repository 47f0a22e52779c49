#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hamcap/chart.hpp"
#include "hamcap/hamiltonian.hpp"

namespace hamcap {

struct TangentVector {
    Vec dq;
    Vec dp;
};

// Sampled flow line in the universal cover (no wrapping during
// integration, so lift continuity is automatic for adequate step counts).
struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> points;
    double h = 0.0;

    const PhasePoint& front() const { return points.front(); }
    const PhasePoint& back() const { return points.back(); }
};

// Linearized period map d(phi^1) at the start point, (q...,p...) ordering.
struct Monodromy {
    Mat matrix;
};

// Darboux form: dq = dH/dp, dp = -dH/dq.
TangentVector vector_field(const Hamiltonian& H, double t,
                           const PhasePoint& x);

struct FlowOptions {
    int steps = 2048;
    double t_end = 1.0;
    double newton_tol = 1e-12;
    int newton_max = 50;
    bool want_monodromy = false;
    bool want_monodromy_path = false;  // d(phi^t) after every step
    bool store_trajectory = true;      // shooting iterations only need the end
};

struct FlowResult {
    Trajectory trajectory;   // empty when store_trajectory is off
    PhasePoint end;
    Mat monodromy;                  // valid when want_monodromy
    std::vector<Mat> monodromy_path;
};

// Implicit-midpoint integration of the Hamiltonian flow, with the exact
// Jacobian of the numerical step propagated alongside when requested (the
// Cayley-type update, so the monodromy is symplectic to rounding).
// Throws NewtonDivergence if an implicit step fails, LeftChart if p exits a
// bounded chart.
FlowResult flow(const Hamiltonian& H, const Chart& chart, const PhasePoint& x0,
                const FlowOptions& opt = {});

// Monodromy of a closed orbit, recomputed from its start point with the
// trajectory's own step count.
Monodromy monodromy(const Hamiltonian& H, const Chart& chart,
                    const Trajectory& orbit);

// det(M - I) bounded away from zero.
bool is_nondegenerate(const Monodromy& m, double tol = 1e-8);

// omega(u, v) with omega = sum dp_i ^ dq_i.
double symplectic_product(const TangentVector& u, const TangentVector& v);

}  // namespace hamcap
