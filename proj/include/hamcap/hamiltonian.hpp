#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "hamcap/chart.hpp"
#include "hamcap/profile.hpp"

namespace hamcap {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                          Eigen::ColMajor, 2 * kMaxPairs, 2 * kMaxPairs>;

// Cotangent data of H at a point, split into q and p partials.
struct PhaseGradient {
    Vec dq;
    Vec dp;
};

// Conservative p-range of interest per pair (support plus the plateaus the
// profile machinery leaves outside it); used to place orbit seeds.
struct SupportBox {
    Vec p_lo;
    Vec p_hi;
};

// Time-(in)dependent scalar field with exact first and second derivatives.
// All presets are assembled from profile compositions and trigonometric
// factors, so the gradients and Hessians are analytic.
class Hamiltonian {
public:
    virtual ~Hamiltonian() = default;

    virtual double value(double t, const PhasePoint& x) const = 0;
    virtual PhaseGradient gradient(double t, const PhasePoint& x) const = 0;
    // Hessian in (q_0..q_{n-1}, p_0..p_{n-1}) ordering.
    virtual Mat hessian(double t, const PhasePoint& x) const = 0;

    virtual int pairs() const = 0;
    virtual bool time_dependent() const { return false; }
    virtual SupportBox support() const = 0;
};

using HamiltonianPtr = std::shared_ptr<const Hamiltonian>;

// H(q,p) = h(p_i - center), or h applied to the wrapped representative of
// p_i - center in [-1/2, 1/2) when wrap is set (torus charts).
HamiltonianPtr profile_hamiltonian(SmoothProfile h, int pairs = 1,
                                   int coord = 0, double center = 0.0,
                                   bool wrap = false, double support_lo = 0.0,
                                   double support_hi = 0.0);

// Constant field (zero vector field).
HamiltonianPtr constant_hamiltonian(double c, int pairs = 1);

// Sum of terms over a common chart dimension.
HamiltonianPtr sum_hamiltonian(std::vector<HamiltonianPtr> terms);

// amp * (offset + cos_coef * cos(2 pi (freq q_j + phase))) * bump(p_i).
HamiltonianPtr cos_product_hamiltonian(double amp, double offset,
                                       double cos_coef, int freq, double phase,
                                       SmoothProfile bump, int pairs = 1,
                                       int qcoord = 0, int pcoord = 0,
                                       double center = 0.0, bool wrap = false);

// G^k(q,p) = mu(|p|-k) * H(q,p) on the covering strip of a torus
// Hamiltonian H (which must be 1-periodic in q and p by construction).
HamiltonianPtr build_Gk(HamiltonianPtr torus_hamiltonian, int k);

// Slope-bounded profile of the no-orbit annulus construction: depends only
// on p, vanishes outside (-tau, R) with R = C/r, has f(0) = C - delta and
// f' > -r everywhere.  min_slope reports the grid-checked slope bound.
struct AnnulusCounterexample {
    HamiltonianPtr hamiltonian;
    SmoothProfile profile;
    double min_slope;      // grid minimum of f'
    double gap;            // f(0) - f(R) = C - delta
};
AnnulusCounterexample counterexample_annulus(double C, double delta, int r,
                                             double tau);

// Lagrangian-torus counterexample on ProductTorus(n):
// H_k = f_{0,k,d(0,Gamma)/2}(d(p,Gamma)) with Gamma = {(p-w).beta = 0}.
// All nonconstant orbits move along beta, so no orbit in class alpha when
// alpha is not proportional to beta.
struct LagrangianCounterexample {
    HamiltonianPtr hamiltonian;
    IVec beta;
    double d0;             // distance from p=0 to Gamma
    double gap;            // inf_{p=0} H - sup_{p=w} H = k
};
LagrangianCounterexample counterexample_lagrangian(int n, const Vec& w, int k,
                                                   const HomotopyClass& alpha);

// h(rho) with rho the torus distance from p to 0 on ProductTorus(n);
// h must be flat near 0 and vanish before rho = 1/2.
HamiltonianPtr radial_profile_hamiltonian(SmoothProfile h, int pairs,
                                          double support_hi);

// Grid extrema of H over a box in (q,p); 512 points per axis by default.
double grid_sup(const Hamiltonian& H, const Vec& q_lo, const Vec& q_hi,
                const Vec& p_lo, const Vec& p_hi, int n_per_axis = 512);
double grid_inf(const Hamiltonian& H, const Vec& q_lo, const Vec& q_hi,
                const Vec& p_lo, const Vec& p_hi, int n_per_axis = 512);

}  // namespace hamcap
