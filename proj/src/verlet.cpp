#include "ghostflow/verlet.hpp"

#include <cmath>
#include <string>

namespace ghostflow::md {

VerletIntegrator::VerletIntegrator(ParticleState state, PotentialSpec pot, TorusDomain dom,
                                   ForceMode mode, int threads)
    : state_(std::move(state)), pot_(pot), dom_(dom), mode_(mode), threads_(threads) {
    dom_.validate();
    forces_ = compute_forces(state_, pot_, dom_, mode_, threads_);
}

void VerletIntegrator::refresh_forces() {
    forces_ = compute_forces(state_, pot_, dom_, mode_, threads_);
}

void VerletIntegrator::step(double dt) {
    if (!(dt > 0.0)) throw config_error("verlet_step: dt must be positive");
    const std::size_t n = state_.size();
    const double half = 0.5 * dt;
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < state_.dim; ++k) {
            state_.vel[i][k] += half * forces_.force[i][k];
            state_.pos[i][k] += dt * state_.vel[i][k];
        }
        state_.pos[i] = dom_.wrap(state_.pos[i]);
    }
    forces_ = compute_forces(state_, pot_, dom_, mode_, threads_);
    bool bad = false;
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < state_.dim; ++k) {
            state_.vel[i][k] += half * forces_.force[i][k];
            if (!std::isfinite(state_.vel[i][k]) || !std::isfinite(state_.pos[i][k])) bad = true;
        }
    }
    ++steps_;
    state_.time += dt;
    if (bad)
        throw propagation_error("non-finite state at step " + std::to_string(steps_));
}

void VerletIntegrator::run(double dt, long n_steps) {
    for (long s = 0; s < n_steps; ++s) step(dt);
}

ParticleState verlet_step(const ParticleState& s, double dt, const PotentialSpec& pot,
                          const TorusDomain& dom) {
    VerletIntegrator integ(s, pot, dom);
    integ.step(dt);
    return integ.state();
}

} // namespace ghostflow::md
