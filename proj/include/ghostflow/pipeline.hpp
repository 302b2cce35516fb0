#pragma once

#include <string>

#include "ghostflow/appendix_coeffs.hpp"
#include "ghostflow/correlation.hpp"
#include "ghostflow/eos.hpp"
#include "ghostflow/gibbs.hpp"
#include "ghostflow/greenkubo.hpp"
#include "ghostflow/verlet.hpp"

namespace ghostflow::pipeline {

struct EquilibriumRunConfig {
    int dim = 2;
    double side = 16.0;           // microscopic box side
    std::size_t n_particles = 64; // fixed-N ensemble for Green-Kubo runs
    double temperature = 1.0;
    md::PotentialSpec pot;
    double dt = 2e-3;
    long steps = 100000;
    long save_every = 20;
    int members = 8;
    long sampler_sweeps = 300;
    double eps = 0.1;
    std::uint64_t seed = 1;
    int threads = 1; // members run in parallel; results independent of count
};

// Independent canonical Gibbs members propagated by Hamiltonian dynamics,
// with current totals recorded every save_every steps.
corr::Ensemble run_equilibrium_ensemble(const EquilibriumRunConfig& cfg);

// Everything cmd_coefficients emits, assembled in one pass over an ensemble.
struct CoefficientSet {
    corr::GkResult eta;
    corr::GkResult zeta;             // trace-channel route
    corr::GkResult zeta_reconstructed; // c'(tau), eta route
    corr::GkResult kappa;            // projected channels
    corr::GkResult kappa_raw_route;  // raw channels minus the sum-rule constant
    corr::StaticYResult statics;
    corr::DoubleTimeCoefficients double_time;
    corr::AssembledCoefficients assembled;
    double temperature = 0.0;
    double rho = 0.0;
    double energy_per_mass = 0.0;
    double pressure = 0.0;
    double condition_number = 0.0;

    void write_csv(const std::string& path) const;
};

struct CoefficientOptions {
    std::size_t max_lag = 300;
    corr::PlateauRule rule;
    bool with_double_time = true;
};

CoefficientSet compute_coefficients(const corr::Ensemble& ens, double temperature,
                                    const eos::EquationOfState& eos_ref,
                                    const CoefficientOptions& opts = {});

// correlation channel dump: channel,tau,value,count
void write_correlation_csv(const std::string& path,
                           const std::vector<corr::CorrelationSeries>& series);

} // namespace ghostflow::pipeline
