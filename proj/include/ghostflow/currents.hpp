#pragma once

#include <vector>

#include "ghostflow/forces.hpp"
#include "ghostflow/particle_state.hpp"
#include "ghostflow/stats.hpp"

namespace ghostflow::fields {

// Per-particle current data shared by the grid and totals paths.
//   psi[b][k]  = sum_j Psi^{bk}(xi_ij),  Psi^{bk}(xi) = -V'(r)/r xi^b xi^k
//   esym[k]    = 1/2 sum_j sum_g Psi^{gk}(xi_ij) * (v_i^g + v_j^g)/2
//   pair_pot   = sum_j V(r_ij)
//   phi_ab[a][b] = sum_j V'(r)/r (xi^b)^2 (xi^a)^2   (static Y kernel)
struct PerParticleCurrents {
    std::vector<double> pair_pot;
    std::vector<double> psi;    // [i*9 + b*3 + k]
    std::vector<double> esym;   // [i*3 + k]
    std::vector<double> phi_ab; // [i*9 + a*3 + b]
};

PerParticleCurrents accumulate_pair_currents(const md::ParticleState& s,
                                             const md::PotentialSpec& pot,
                                             const md::TorusDomain& dom);

// Volume-integrated microscopic observables of one snapshot, in microscopic
// units (plain particle sums, no eps factors).  Everything the correlation
// engine consumes is a space integral, and by translation invariance those
// reduce to covariances of these totals.
struct CurrentTotals {
    double time = 0.0;
    int dim = 2;
    double volume = 0.0;   // microscopic box volume
    double z[5] = {0, 0, 0, 0, 0}; // N, P_1..P_d, E  (slots [0], [1..d], [d+1])
    double wstar[3][3] = {};       // momentum current  v^b v^k + 1/2 Psi
    double w_energy[3] = {};       // energy current    v^k z^{d+1} + esym
    double phi_ab[3][3] = {};      // static Y kernel, 1/2 sum_{i!=j}
    double v_we[3][3] = {};        // [g][m] sum_i v^g w^{d+1,m}_i
    double a_cur[3][3] = {};       // [g][m] sum_i z_i^{d+1} psi_i^{gm}
    double c_cur[3][3] = {};       // [g][s] 1/2 sum_i v_i^s esym_i^g
    double n_cur[3][3] = {};       // [g][m] -1/8 sum_i sum_k psi_i^{km} psi_i^{kg}

    double z_energy() const { return z[dim + 1]; }
};

CurrentTotals current_totals(const md::ParticleState& s, const md::PotentialSpec& pot,
                             const md::TorusDomain& dom);

struct VirialResult {
    MeanErr pressure;                  // rho*T + interaction part
    std::vector<MeanErr> per_channel;  // beta-diagonal channels, isotropy check
};

// Virial estimator P = rho T + (1/(d V)) < sum_{i<j} (-V'(r) r) > over an
// ensemble of configurations from a Gibbs state at (rho, T).
VirialResult virial_pressure(const std::vector<md::ParticleState>& ensemble, double temperature,
                             double rho, const md::PotentialSpec& pot,
                             const md::TorusDomain& dom);

} // namespace ghostflow::fields
