#pragma once

#include "ghostflow/eos.hpp"
#include "ghostflow/greenkubo.hpp"
#include "ghostflow/projector.hpp"

namespace ghostflow::corr {

struct NullTestRow {
    std::string name;
    double value = 0.0;
    double stderr_ = 0.0;
    double sigma_distance = 0.0;
    bool pass = false;
};

struct GalileanReport {
    std::vector<NullTestRow> rows;
    std::size_t window_lags = 0;
    bool all_pass = false;
};

// Galilean-invariance null checks:
//  - the time-integrated cross correlation of the momentum field with the
//    subtracted momentum current vanishes;
//  - the boost-derivative combination (1/T) int <(v^mu w^{d+1 g}) w_bar> +
//    int <w_bar^{mu g} w_bar^{beta k}> vanishes even though each term alone
//    is finite.
// All integrals use a common window taken from the shear channel plateau.
GalileanReport galilean_null_test(const Ensemble& ens, const ProjectionBasis& basis,
                                  double temperature, std::size_t max_lag,
                                  const PlateauRule& rule = {}, int n_boot = 200,
                                  std::uint64_t seed = 99);

struct SumRuleRow {
    std::string name;
    double measured = 0.0;
    double target = 0.0;
    double stderr_ = 0.0;
    double sigma_distance = 0.0;
    bool pass = false;
};

struct CompatibilityReport {
    std::vector<SumRuleRow> rows;
    bool all_pass = false;
};

// Static sum rules of the current-current correlations at equal time:
//   int <w^{0 nu} w^{0 g}>      = rho T d_{nu g}
//   int <w^{0 nu} w^{d+1 g}>    = T (rho e + P) d_{nu g}
//   slow part of the energy-current autocorrelation = T (rho e + P)^2 / rho
//   momentum-current cross correlations with the 0/d+1 currents vanish
CompatibilityReport compatibility_residuals(const Ensemble& ens, const ProjectionBasis& basis,
                                            double rho, double temperature, double e, double p,
                                            int n_boot = 200, std::uint64_t seed = 31);

struct IdentityCheckRow {
    double rho = 0.0, temperature = 0.0;
    double residual = 0.0;
    double propagated_error = 0.0;
    bool pass = false;
};

// Thermodynamic identity  (lambda0)' rho + (lambda^{d+1})' (rho e + P) = 0
// checked at random interior points of a measured table, against three times
// the propagated statistical error of the table.
std::vector<IdentityCheckRow> thermo_identity_check(const eos::StateEquationTable& table,
                                                    int n_points, Rng& rng);

} // namespace ghostflow::corr
