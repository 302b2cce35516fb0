#pragma once

#include "ghostflow/correlation.hpp"
#include "ghostflow/projector.hpp"

namespace ghostflow::corr {

struct PlateauRule {
    double noise_factor = 2.0; // |C| must stay below noise_factor * stderr
    int run_length = 10;       // for this many consecutive lags
};

struct GkResult {
    double value = 0.0;
    double stderr_ = 0.0;
    double window_time = 0.0; // integration cut in microscopic time
    std::size_t window_lags = 0;
    bool converged = false;
    std::string flag; // empty or "non-converged"
};

// Trapezoidal time integral of C(tau) up to the first lag where |C| stays
// below the noise floor for run_length consecutive lags; if that never
// happens the full range is integrated and the result flagged.  weight_tau
// switches to the first-moment integral int tau C(tau) dtau used by the
// double-time coefficients.
GkResult integrate_correlation(const CorrelationSeries& c, const PlateauRule& rule,
                               bool weight_tau = false);

// plain trapezoid up to a caller-chosen lag (used by the null tests, which
// share a window across channels)
double integrate_fixed(const CorrelationSeries& c, std::size_t cut_lags,
                       bool weight_tau = false);

// eta = (1/2T) int dtau C_offdiag(tau)
GkResult green_kubo_shear(const CorrelationSeries& acc, double temperature,
                          const PlateauRule& rule = {});

// zeta = (1/(2 d^2 T)) int dtau C_trace(tau), trace channel centered and
// slow-mode subtracted
GkResult green_kubo_bulk(const CorrelationSeries& acc, double temperature, int dim,
                         const PlateauRule& rule = {});

// kappa = (1/(2 d T^2)) int dtau sum_k [C_kk(tau) - subtraction_per_channel];
// with projected channels the subtraction is zero (Green-Kubo route), with
// raw channels it is T (rho e + P)^2 / rho (sum-rule route)
GkResult green_kubo_conductivity(const CorrelationSeries& summed_channels, double temperature,
                                 double rho, double e, double p, int dim, bool raw_route,
                                 const PlateauRule& rule = {});

// Least-squares reduction of the momentum-current correlation tensor
// C^{mu l, beta k}(tau) onto
//   c(tau) [d_{kl} d_{beta mu} + d_{k mu} d_{beta l}] + c'(tau) d_{beta k} d_{l mu}
struct IsotropyDecomposition {
    CorrelationSeries c;       // shear kernel
    CorrelationSeries c_prime; // trace kernel
    std::vector<double> residual_norm; // per lag
    bool anisotropy_warning = false;
};

// channels indexed [((mu*d + l)*d + beta)*d + k]
IsotropyDecomposition isotropy_decompose(const std::vector<CorrelationSeries>& channels, int dim);

} // namespace ghostflow::corr
