#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ghostflow/rng.hpp"

namespace ghostflow {

struct MeanErr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

inline MeanErr mean_stderr(const std::vector<double>& x) {
    MeanErr r;
    r.n = x.size();
    if (x.empty()) return r;
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s2 = 0.0;
    for (double v : x) s2 += (v - m) * (v - m);
    r.mean = m;
    if (x.size() > 1) {
        s2 /= static_cast<double>(x.size() - 1);
        r.stderr_ = std::sqrt(s2 / static_cast<double>(x.size()));
    }
    return r;
}

// Standard error of the mean of a correlated series via non-overlapping
// batch means.
inline MeanErr batch_mean_stderr(const std::vector<double>& x, std::size_t n_batches = 16) {
    if (x.size() < 2 * n_batches) return mean_stderr(x);
    const std::size_t len = x.size() / n_batches;
    std::vector<double> batches(n_batches, 0.0);
    for (std::size_t b = 0; b < n_batches; ++b) {
        double m = 0.0;
        for (std::size_t i = 0; i < len; ++i) m += x[b * len + i];
        batches[b] = m / static_cast<double>(len);
    }
    return mean_stderr(batches);
}

// Integrated autocorrelation time with the usual self-consistent window
// (sum until lag > 5 * tau_int).
inline double integrated_autocorr_time(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 8) return 1.0;
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    c0 /= static_cast<double>(n);
    if (c0 <= 0.0) return 1.0;
    double tau = 0.5;
    for (std::size_t lag = 1; lag < n / 2; ++lag) {
        double c = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) c += (x[i] - m) * (x[i + lag] - m);
        c /= static_cast<double>(n - lag);
        tau += c / c0;
        if (static_cast<double>(lag) > 5.0 * tau) break;
    }
    return std::max(tau, 0.5) * 2.0; // in units of samples, tau_int convention 1+2*sum
}

// Moving-block bootstrap for the standard error of a statistic computed
// from a scalar series.  The statistic is the plain mean here; callers that
// need a derived quantity resample indices themselves.
inline double block_bootstrap_stderr(const std::vector<double>& x,
                                     std::size_t block_len,
                                     std::size_t n_boot,
                                     Rng& rng) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    block_len = std::max<std::size_t>(1, std::min(block_len, n));
    const std::size_t n_blocks = (n + block_len - 1) / block_len;
    std::vector<double> means;
    means.reserve(n_boot);
    for (std::size_t b = 0; b < n_boot; ++b) {
        double sum = 0.0;
        std::size_t cnt = 0;
        for (std::size_t k = 0; k < n_blocks; ++k) {
            const std::size_t start = rng.uniform_index(n - block_len + 1);
            for (std::size_t i = 0; i < block_len && cnt < n; ++i, ++cnt)
                sum += x[start + i];
        }
        means.push_back(sum / static_cast<double>(cnt));
    }
    MeanErr me = mean_stderr(means);
    double sd = 0.0;
    for (double v : means) sd += (v - me.mean) * (v - me.mean);
    sd = std::sqrt(sd / static_cast<double>(means.size() > 1 ? means.size() - 1 : 1));
    return sd;
}

} // namespace ghostflow
