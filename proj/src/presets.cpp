#include "hamcap/presets.hpp"

#include "hamcap/profile.hpp"

namespace hamcap {

SqueezeScenario annulus_default_scenario() {
    SqueezeScenario s;
    s.name = "annulus-default";
    s.chart = Chart::annulus(1.0);
    s.H = profile_hamiltonian(g_profile(0.0, 1.0, 0.2), 1, 0, 0.0, false,
                              -0.7, 0.7);
    s.r = 1;
    s.R = 0.6;
    return s;
}

SqueezeScenario annulus_r2_scenario() {
    SqueezeScenario s;
    s.name = "annulus-r2";
    s.chart = Chart::annulus(1.0);
    s.H = profile_hamiltonian(g_profile(0.0, 2.0, 0.2), 1, 0, 0.0, false,
                              -0.7, 0.7);
    s.r = 2;
    s.R = 0.6;
    return s;
}

HamiltonianPtr torus_base_hamiltonian() {
    return profile_hamiltonian(g_profile(0.0, 0.5, 0.2), 1, 0, 0.0, true,
                               -0.5, 0.5);
}

HamiltonianPtr torus_perturbed_hamiltonian() {
    HamiltonianPtr base = torus_base_hamiltonian();
    HamiltonianPtr pert = cos_product_hamiltonian(
        0.01, 1.0, -1.0, 1, 0.0, g_profile(0.0, 1.0, 0.24), 1, 0, 0, 0.0,
        true);
    return sum_hamiltonian({base, pert});
}

namespace {

class ScaledHamiltonian final : public Hamiltonian {
public:
    ScaledHamiltonian(HamiltonianPtr h, double s) : h_(std::move(h)), s_(s) {}
    double value(double t, const PhasePoint& x) const override {
        return s_ * h_->value(t, x);
    }
    PhaseGradient gradient(double t, const PhasePoint& x) const override {
        PhaseGradient g = h_->gradient(t, x);
        g.dq *= s_;
        g.dp *= s_;
        return g;
    }
    Mat hessian(double t, const PhasePoint& x) const override {
        return s_ * h_->hessian(t, x);
    }
    int pairs() const override { return h_->pairs(); }
    bool time_dependent() const override { return h_->time_dependent(); }
    SupportBox support() const override { return h_->support(); }

private:
    HamiltonianPtr h_;
    double s_;
};

}  // namespace

HamiltonianPtr scaled_hamiltonian(HamiltonianPtr H, double factor) {
    return std::make_shared<ScaledHamiltonian>(std::move(H), factor);
}

}  // namespace hamcap
