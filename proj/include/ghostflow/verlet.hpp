#pragma once

#include "ghostflow/forces.hpp"

namespace ghostflow::md {

// Velocity-Verlet integrator.  Caches forces between steps so one force
// evaluation is done per step.
class VerletIntegrator {
public:
    VerletIntegrator(ParticleState state, PotentialSpec pot, TorusDomain dom,
                     ForceMode mode = ForceMode::cell_list, int threads = 1);

    // Advance by a single step of size dt.  Throws propagation_error if
    // NaN/Inf shows up, with the offending step index in the message.
    void step(double dt);
    void run(double dt, long n_steps);

    const ParticleState& state() const { return state_; }
    ParticleState& state() { return state_; }
    double potential_energy() const { return forces_.potential_energy; }
    long steps_taken() const { return steps_; }

    // Re-evaluate forces after external modification of the state.
    void refresh_forces();

private:
    ParticleState state_;
    PotentialSpec pot_;
    TorusDomain dom_;
    ForceMode mode_;
    int threads_;
    ForceResult forces_;
    long steps_ = 0;
};

// Single step convenience wrapper (recomputes forces twice).
ParticleState verlet_step(const ParticleState& s, double dt, const PotentialSpec& pot,
                          const TorusDomain& dom);

} // namespace ghostflow::md
