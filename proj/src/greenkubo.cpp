#include "ghostflow/greenkubo.hpp"

#include <cmath>

#include "ghostflow/errors.hpp"

namespace ghostflow::corr {

GkResult integrate_correlation(const CorrelationSeries& c, const PlateauRule& rule,
                               bool weight_tau) {
    const std::size_t n = c.value.size();
    if (n < 2) throw numerical_error("integrate_correlation: series too short");

    // locate the integration window
    std::size_t cut = n - 1;
    bool converged = false;
    int run = 0;
    for (std::size_t lag = 1; lag < n; ++lag) {
        const double noise = rule.noise_factor * std::max(c.stderr_[lag], 0.0);
        if (noise > 0.0 && std::fabs(c.value[lag]) < noise) {
            if (++run >= rule.run_length) {
                cut = lag - static_cast<std::size_t>(rule.run_length) + 1;
                converged = true;
                break;
            }
        } else {
            run = 0;
        }
    }

    GkResult out;
    out.converged = converged;
    if (!converged) out.flag = "non-converged";
    out.window_lags = cut;
    out.window_time = c.lag_time[cut];

    auto integrand = [&](std::size_t lag) {
        return weight_tau ? c.lag_time[lag] * c.value[lag] : c.value[lag];
    };
    double integral = 0.0;
    double var = 0.0;
    for (std::size_t lag = 1; lag <= cut; ++lag) {
        const double h = c.lag_time[lag] - c.lag_time[lag - 1];
        integral += 0.5 * h * (integrand(lag) + integrand(lag - 1));
        const double w0 = weight_tau ? c.lag_time[lag - 1] : 1.0;
        const double w1 = weight_tau ? c.lag_time[lag] : 1.0;
        var += 0.25 * h * h *
               (w0 * w0 * c.stderr_[lag - 1] * c.stderr_[lag - 1] +
                w1 * w1 * c.stderr_[lag] * c.stderr_[lag]);
    }
    out.value = integral;
    // neighboring lags share samples; treat them as fully correlated in
    // pairs, which roughly doubles the naive variance
    out.stderr_ = std::sqrt(2.0 * var);
    return out;
}

double integrate_fixed(const CorrelationSeries& c, std::size_t cut_lags, bool weight_tau) {
    const std::size_t cut = std::min(cut_lags, c.value.size() - 1);
    double integral = 0.0;
    for (std::size_t lag = 1; lag <= cut; ++lag) {
        const double h = c.lag_time[lag] - c.lag_time[lag - 1];
        const double f0 = weight_tau ? c.lag_time[lag - 1] * c.value[lag - 1] : c.value[lag - 1];
        const double f1 = weight_tau ? c.lag_time[lag] * c.value[lag] : c.value[lag];
        integral += 0.5 * h * (f0 + f1);
    }
    return integral;
}

GkResult green_kubo_shear(const CorrelationSeries& acc, double temperature,
                          const PlateauRule& rule) {
    GkResult r = integrate_correlation(acc, rule);
    const double f = 1.0 / (2.0 * temperature);
    r.value *= f;
    r.stderr_ *= f;
    return r;
}

GkResult green_kubo_bulk(const CorrelationSeries& acc, double temperature, int dim,
                         const PlateauRule& rule) {
    GkResult r = integrate_correlation(acc, rule);
    const double f = 1.0 / (2.0 * dim * dim * temperature);
    r.value *= f;
    r.stderr_ *= f;
    return r;
}

GkResult green_kubo_conductivity(const CorrelationSeries& summed_channels, double temperature,
                                 double rho, double e, double p, int dim, bool raw_route,
                                 const PlateauRule& rule) {
    CorrelationSeries c = summed_channels;
    if (raw_route) {
        const double sub =
            static_cast<double>(dim) * temperature * (rho * e + p) * (rho * e + p) / rho;
        for (auto& v : c.value) v -= sub;
    }
    GkResult r = integrate_correlation(c, rule);
    const double f = 1.0 / (2.0 * dim * temperature * temperature);
    r.value *= f;
    r.stderr_ *= f;
    return r;
}

IsotropyDecomposition isotropy_decompose(const std::vector<CorrelationSeries>& channels,
                                         int dim) {
    const std::size_t d = static_cast<std::size_t>(dim);
    if (channels.size() != d * d * d * d)
        throw config_error("isotropy_decompose: need all d^4 channels");
    const std::size_t nlag = channels.front().value.size();

    // constant design matrix over index tuples
    SmallMat design(d * d * d * d, 2);
    std::size_t row = 0;
    for (std::size_t mu = 0; mu < d; ++mu)
        for (std::size_t l = 0; l < d; ++l)
            for (std::size_t beta = 0; beta < d; ++beta)
                for (std::size_t k = 0; k < d; ++k, ++row) {
                    design(row, 0) = (k == l && beta == mu ? 1.0 : 0.0) +
                                     (k == mu && beta == l ? 1.0 : 0.0);
                    design(row, 1) = (beta == k && l == mu) ? 1.0 : 0.0;
                }

    IsotropyDecomposition out;
    out.c = channels.front();
    out.c_prime = channels.front();
    out.c.label = "c(tau)";
    out.c_prime.label = "c_prime(tau)";
    out.residual_norm.assign(nlag, 0.0);

    double worst_sigma = 0.0;
    for (std::size_t lag = 0; lag < nlag; ++lag) {
        std::vector<double> y(d * d * d * d);
        for (std::size_t ch = 0; ch < y.size(); ++ch) y[ch] = channels[ch].value[lag];
        const auto fit = least_squares(design, y);
        out.c.value[lag] = fit[0];
        out.c_prime.value[lag] = fit[1];
        double res = 0.0, sig2 = 0.0;
        for (std::size_t ch = 0; ch < y.size(); ++ch) {
            const double pred = design(ch, 0) * fit[0] + design(ch, 1) * fit[1];
            res += (y[ch] - pred) * (y[ch] - pred);
            sig2 += channels[ch].stderr_[lag] * channels[ch].stderr_[lag];
        }
        out.residual_norm[lag] = std::sqrt(res);
        // propagate channel errors through the fit crudely: scale by the
        // design pseudo-inverse row norms
        out.c.stderr_[lag] = std::sqrt(sig2 / y.size());
        out.c_prime.stderr_[lag] = std::sqrt(sig2);
        if (std::sqrt(sig2) > 0.0)
            worst_sigma = std::max(worst_sigma, out.residual_norm[lag] / std::sqrt(sig2));
    }
    out.anisotropy_warning = worst_sigma > 5.0;
    return out;
}

} // namespace ghostflow::corr
