#pragma once

#include "ghostflow/eos.hpp"
#include "ghostflow/greenkubo.hpp"
#include "ghostflow/projector.hpp"

namespace ghostflow::corr {

// Static contributions to the thermal-stress coefficients: T-derivatives of
// the mean pair tensor Phi_hat expressed through (centered) static
// correlators with the conserved totals.
struct StaticYResult {
    double y1 = 0.0, y2 = 0.0;
    double w1_bar = 0.0, w2_bar = 0.0;
    double y1_err = 0.0, y2_err = 0.0;
    double w1_err = 0.0, w2_err = 0.0;
};

StaticYResult static_y_coefficients(const Ensemble& ens, const eos::LambdaDerivatives& ld,
                                    int n_boot = 200, std::uint64_t seed = 77);

// Double-time-integral channels.  Families a, b, c are three-current
// objects; d, h, g, f correlate a composite current with the subtracted
// momentum current.  Every value is int_0^inf ds int_s^inf dtau C(tau)
// = int tau C(tau) dtau, reduced onto the isotropic patterns
//   x1 d_{beta k} d_{gamma nu} + x2 (d_{beta nu} d_{gamma k} + d_{beta gamma} d_{nu k}).
struct DoubleTimeCoefficients {
    GkResult a1, a2; // legs w^{0 gamma}, w^{d+1 nu}
    GkResult b1, b2; // legs w^{0 gamma}, w^{0 nu}
    GkResult c1, c2; // legs w^{d+1 gamma}, w^{d+1 nu}
    GkResult d1, d2; // leg v^g w^{d+1 m} + A^{gm}
    GkResult h1, h2; // leg w_bar^{nu gamma}
    GkResult g1, g2; // leg C^{gamma s}
    GkResult f1;     // leg N^{gamma m}, trace pattern only
    bool all_converged = false;
};

DoubleTimeCoefficients double_time_coefficients(const Ensemble& ens,
                                                const ProjectionBasis& basis,
                                                std::size_t max_lag,
                                                const PlateauRule& rule = {});

// K_i = Y_i + Z_i and omega_i = omega_bar_i + phi_i with the closing
// formulas of the transport-coefficient computation.
struct AssembledCoefficients {
    double y1 = 0.0, y2 = 0.0, w1_bar = 0.0, w2_bar = 0.0;
    double z1 = 0.0, z2 = 0.0, phi1 = 0.0, phi2 = 0.0;
    double k1 = 0.0, k2 = 0.0, omega1 = 0.0, omega2 = 0.0;
    bool reliable = false; // every contributing time integral converged
};

AssembledCoefficients assemble_thermal_stress(const StaticYResult& ys,
                                              const DoubleTimeCoefficients& dt,
                                              const eos::LambdaDerivatives& ld,
                                              double temperature);

} // namespace ghostflow::corr
