#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ghostflow/potential.hpp"
#include "ghostflow/rng.hpp"
#include "ghostflow/spline.hpp"

namespace ghostflow::eos {

// State equation interface used by the PDE solver and the coefficient
// analysis: P(rho,T), internal energy per unit mass e(rho,T), entropy per
// unit mass s(rho,T) and their partials.
class EquationOfState {
public:
    virtual ~EquationOfState() = default;
    virtual double pressure(double rho, double T) const = 0;
    virtual double energy(double rho, double T) const = 0;
    virtual double entropy(double rho, double T) const = 0;
    virtual double dP_drho(double rho, double T) const = 0;
    virtual double dP_dT(double rho, double T) const = 0;
    virtual double de_drho(double rho, double T) const = 0;
    virtual double de_dT(double rho, double T) const = 0;

    // Invert P(rho, T) = target in rho at fixed T (Newton; dP/drho > 0).
    double rho_of_PT(double target_p, double T, double rho_guess, double tol = 1e-12) const;
    // Invert P(rho, T) = target in T at fixed rho.
    double T_of_rhoP(double target_p, double rho, double t_guess, double tol = 1e-12) const;
};

// P = rho T, e = (d/2) T, s = (d/2) ln T - ln rho.
class IdealGasEos final : public EquationOfState {
public:
    explicit IdealGasEos(int dim) : dim_(dim) {}
    double pressure(double rho, double T) const override { return rho * T; }
    double energy(double, double T) const override { return 0.5 * dim_ * T; }
    double entropy(double rho, double T) const override;
    double dP_drho(double, double T) const override { return T; }
    double dP_dT(double rho, double) const override { return rho; }
    double de_drho(double, double) const override { return 0.0; }
    double de_dT(double, double) const override { return 0.5 * dim_; }

private:
    int dim_;
};

// Rectangular (rho, T) table with tensor-spline interpolation.  Entropy is
// reconstructed from the thermodynamic relations
//   ds = (1/T) de - P/(T rho^2) drho
// by integrating from the grid origin along two independent paths; the
// table stores their average and the worst discrepancy.
class StateEquationTable final : public EquationOfState {
public:
    std::vector<double> rho_pts, t_pts;
    std::vector<double> p_vals, e_vals, s_vals;       // row-major [i_rho * nT + j]
    std::vector<double> p_err, e_err;                 // standard errors
    std::vector<char> point_ok;                       // sampling converged?
    std::string provenance;                           // measured-from-MD | ideal-gas-analytic
    double path_discrepancy = 0.0;                    // max |s_A - s_B| over grid
    double path_error_estimate = 0.0;                 // propagated sigma of (s_A - s_B)
    int dim = 2;

    bool complete() const;
    void finalize(); // integrate entropy, build splines

    double pressure(double rho, double T) const override { return sp_.eval(rho, T, 0, 0); }
    double energy(double rho, double T) const override { return se_.eval(rho, T, 0, 0); }
    double entropy(double rho, double T) const override { return ss_.eval(rho, T, 0, 0); }
    double dP_drho(double rho, double T) const override { return sp_.eval(rho, T, 1, 0); }
    double dP_dT(double rho, double T) const override { return sp_.eval(rho, T, 0, 1); }
    double de_drho(double rho, double T) const override { return se_.eval(rho, T, 1, 0); }
    double de_dT(double rho, double T) const override { return se_.eval(rho, T, 0, 1); }
    double ds_drho(double rho, double T) const { return ss_.eval(rho, T, 1, 0); }
    double ds_dT(double rho, double T) const { return ss_.eval(rho, T, 0, 1); }
    double pressure_err(double rho, double T) const { return sperr_.eval(rho, T, 0, 0); }
    double energy_err(double rho, double T) const { return seerr_.eval(rho, T, 0, 0); }

    void write_csv(const std::string& path) const;
    static StateEquationTable read_csv(const std::string& path);

    // analytic ideal-gas table on a given grid (for tests and the
    // ideal-gas-ghost PDE mode)
    static StateEquationTable ideal(int dim, std::vector<double> rho_pts,
                                    std::vector<double> t_pts);

private:
    Spline2D sp_, se_, ss_, sperr_, seerr_;
};

// log activity corresponding to (rho, T):  lambda0 = (P + rho e)/(rho T) - s.
// Additive constants in s cancel in every derivative we use.
double lambda0_of(const EquationOfState& eos, double rho, double T);

struct LambdaDerivatives {
    double l0_prime = 0.0;        // d lambda0 / dT at constant P
    double l0_double_prime = 0.0; // second T-derivative at constant P
    double le_prime = 0.0;        // d lambda^{d+1}/dT = 1/T^2
    double le_double_prime = 0.0; // -2/T^3
};

// T-derivatives of the chemical potentials along the constant-pressure path
// through (rho, T).
LambdaDerivatives lambda_derivatives_const_p(const EquationOfState& eos, double rho, double T,
                                             double h = 1e-3);

struct TabulateOptions {
    int dim = 2;
    double box_side = 10.0;     // microscopic box used per point
    long burn_sweeps = 200;
    int samples = 40;
    int sweep_stride = 10;
    double displacement = 0.3;
    std::uint64_t seed = 1;
};

// Measure P and e on a rectangular (rho, T) grid from canonical Gibbs
// ensembles and reconstruct s by thermodynamic integration.  rho values are
// snapped to the nearest realizable N/V.
StateEquationTable tabulate_state_equation(const std::vector<double>& rho_pts,
                                           const std::vector<double>& t_pts,
                                           const md::PotentialSpec& pot,
                                           const TabulateOptions& opts);

} // namespace ghostflow::eos
