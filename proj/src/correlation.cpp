#include "ghostflow/correlation.hpp"

#include <cmath>

#include "ghostflow/errors.hpp"
#include "ghostflow/stats.hpp"

namespace ghostflow::corr {

Extractor ex_z(int mu) {
    return [mu](const fields::CurrentTotals& t) { return t.z[mu]; };
}
Extractor ex_wstar(int b, int k) {
    return [b, k](const fields::CurrentTotals& t) { return t.wstar[b][k]; };
}
Extractor ex_w_energy(int k) {
    return [k](const fields::CurrentTotals& t) { return t.w_energy[k]; };
}
Extractor ex_phi_ab(int a, int b) {
    return [a, b](const fields::CurrentTotals& t) { return t.phi_ab[a][b]; };
}
Extractor ex_v_we(int g, int m) {
    return [g, m](const fields::CurrentTotals& t) { return t.v_we[g][m]; };
}
Extractor ex_d_leg(int g, int m) {
    return [g, m](const fields::CurrentTotals& t) { return t.v_we[g][m] + t.a_cur[g][m]; };
}
Extractor ex_c_cur(int g, int s) {
    return [g, s](const fields::CurrentTotals& t) { return t.c_cur[g][s]; };
}
Extractor ex_n_cur(int g, int m) {
    return [g, m](const fields::CurrentTotals& t) { return t.n_cur[g][m]; };
}

Series extract_series(const Ensemble& ens, const Extractor& ex) {
    Series out;
    out.reserve(ens.members.size());
    for (const auto& m : ens.members) {
        std::vector<double> s;
        s.reserve(m.frames.size());
        for (const auto& f : m.frames) s.push_back(ex(f));
        out.push_back(std::move(s));
    }
    return out;
}

double ensemble_mean(const Series& s) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& m : s) {
        for (double v : m) sum += v;
        n += m.size();
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

Series centered(const Series& s) {
    const double m = ensemble_mean(s);
    Series out = s;
    for (auto& mem : out)
        for (double& v : mem) v -= m;
    return out;
}

void CorrelationAccumulator::add_member(const std::vector<double>& a,
                                        const std::vector<double>& b) {
    Partial p;
    p.sum.assign(max_lag_ + 1, 0.0);
    p.count.assign(max_lag_ + 1, 0);
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t lag = 0; lag <= max_lag_; ++lag) {
        if (lag >= n) break;
        double s = 0.0;
        for (std::size_t t0 = 0; t0 + lag < n; ++t0) s += a[t0 + lag] * b[t0];
        p.sum[lag] = s;
        p.count[lag] = static_cast<long>(n - lag);
    }
    members_.push_back(std::move(p));
}

void CorrelationAccumulator::add_member_product(const std::vector<double>& a,
                                                const std::vector<double>& b, double ab_mean,
                                                const std::vector<double>& w) {
    Partial p;
    p.sum.assign(max_lag_ + 1, 0.0);
    p.count.assign(max_lag_ + 1, 0);
    const std::size_t n = std::min({a.size(), b.size(), w.size()});
    for (std::size_t lag = 0; lag <= max_lag_; ++lag) {
        if (lag >= n) break;
        double s = 0.0;
        for (std::size_t t0 = 0; t0 + lag < n; ++t0)
            s += (a[t0 + lag] * b[t0 + lag] - ab_mean) * w[t0];
        p.sum[lag] = s;
        p.count[lag] = static_cast<long>(n - lag);
    }
    members_.push_back(std::move(p));
}

void CorrelationAccumulator::merge(const CorrelationAccumulator& other) {
    if (other.max_lag_ != max_lag_) throw numerical_error("accumulator merge: lag mismatch");
    members_.insert(members_.end(), other.members_.begin(), other.members_.end());
}

CorrelationSeries CorrelationAccumulator::finalize(double frame_dt, double volume,
                                                   const std::string& label,
                                                   std::uint64_t bootstrap_seed,
                                                   int n_boot) const {
    CorrelationSeries out;
    out.label = label;
    out.frame_dt = frame_dt;
    out.lag_time.resize(max_lag_ + 1);
    out.value.assign(max_lag_ + 1, 0.0);
    out.count.assign(max_lag_ + 1, 0);
    out.stderr_.assign(max_lag_ + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag_; ++lag)
        out.lag_time[lag] = static_cast<double>(lag) * frame_dt;

    std::vector<double> sum(max_lag_ + 1, 0.0);
    std::vector<long> count(max_lag_ + 1, 0);
    for (const auto& p : members_) {
        for (std::size_t lag = 0; lag <= max_lag_; ++lag) {
            sum[lag] += p.sum[lag];
            count[lag] += p.count[lag];
        }
    }
    for (std::size_t lag = 0; lag <= max_lag_; ++lag) {
        out.count[lag] = count[lag];
        if (count[lag] > 0) out.value[lag] = sum[lag] / (static_cast<double>(count[lag]) * volume);
    }

    // bootstrap over members
    const std::size_t nm = members_.size();
    if (nm >= 4 && n_boot > 0) {
        Rng rng(bootstrap_seed);
        std::vector<double> acc(max_lag_ + 1, 0.0), acc2(max_lag_ + 1, 0.0);
        std::vector<double> bsum(max_lag_ + 1, 0.0);
        std::vector<long> bcount(max_lag_ + 1, 0);
        for (int b = 0; b < n_boot; ++b) {
            std::fill(bsum.begin(), bsum.end(), 0.0);
            std::fill(bcount.begin(), bcount.end(), 0L);
            for (std::size_t k = 0; k < nm; ++k) {
                const auto& p = members_[rng.uniform_index(nm)];
                for (std::size_t lag = 0; lag <= max_lag_; ++lag) {
                    bsum[lag] += p.sum[lag];
                    bcount[lag] += p.count[lag];
                }
            }
            for (std::size_t lag = 0; lag <= max_lag_; ++lag) {
                const double v =
                    bcount[lag] > 0 ? bsum[lag] / (static_cast<double>(bcount[lag]) * volume) : 0.0;
                acc[lag] += v;
                acc2[lag] += v * v;
            }
        }
        for (std::size_t lag = 0; lag <= max_lag_; ++lag) {
            const double m = acc[lag] / n_boot;
            const double var = std::max(acc2[lag] / n_boot - m * m, 0.0);
            out.stderr_[lag] = std::sqrt(var);
        }
    }
    return out;
}

CorrelationSeries CorrelationAccumulator::finalize_subset(const std::vector<std::size_t>& pick,
                                                          double frame_dt, double volume,
                                                          const std::string& label) const {
    CorrelationSeries out;
    out.label = label;
    out.frame_dt = frame_dt;
    out.lag_time.resize(max_lag_ + 1);
    out.value.assign(max_lag_ + 1, 0.0);
    out.count.assign(max_lag_ + 1, 0);
    out.stderr_.assign(max_lag_ + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag_; ++lag)
        out.lag_time[lag] = static_cast<double>(lag) * frame_dt;
    std::vector<double> sum(max_lag_ + 1, 0.0);
    std::vector<long> count(max_lag_ + 1, 0);
    for (std::size_t idx : pick) {
        const auto& p = members_[idx];
        for (std::size_t lag = 0; lag <= max_lag_; ++lag) {
            sum[lag] += p.sum[lag];
            count[lag] += p.count[lag];
        }
    }
    for (std::size_t lag = 0; lag <= max_lag_; ++lag) {
        out.count[lag] = count[lag];
        if (count[lag] > 0) out.value[lag] = sum[lag] / (static_cast<double>(count[lag]) * volume);
    }
    return out;
}

namespace {

std::size_t checked_max_lag(const Ensemble& ens, std::size_t max_lag) {
    std::size_t shortest = SIZE_MAX;
    for (const auto& m : ens.members) shortest = std::min(shortest, m.frames.size());
    if (ens.members.empty() || shortest == 0) throw config_error("empty ensemble");
    if (max_lag >= shortest)
        throw config_error("time_correlation: max_lag must be < series length");
    return max_lag;
}

} // namespace

CorrelationSeries time_correlation_series(const Ensemble& ens, const Series& a, const Series& b,
                                          std::size_t max_lag, const std::string& label) {
    checked_max_lag(ens, max_lag);
    CorrelationAccumulator acc(max_lag);
    for (std::size_t m = 0; m < ens.members.size(); ++m) acc.add_member(a[m], b[m]);
    return acc.finalize(ens.frame_dt(), ens.volume, label);
}

CorrelationSeries time_correlation(const Ensemble& ens, const Extractor& a, const Extractor& b,
                                   std::size_t max_lag, const std::string& label) {
    const Series sa = centered(extract_series(ens, a));
    const Series sb = centered(extract_series(ens, b));
    return time_correlation_series(ens, sa, sb, max_lag, label);
}

CorrelationSeries three_current_correlation(const Ensemble& ens, const Series& a, const Series& b,
                                            const Series& w, std::size_t max_lag,
                                            const std::string& label) {
    checked_max_lag(ens, max_lag);
    double ab_mean = 0.0;
    std::size_t n = 0;
    for (std::size_t m = 0; m < ens.members.size(); ++m)
        for (std::size_t t = 0; t < a[m].size(); ++t) {
            ab_mean += a[m][t] * b[m][t];
            ++n;
        }
    if (n) ab_mean /= static_cast<double>(n);
    CorrelationAccumulator acc(max_lag);
    for (std::size_t m = 0; m < ens.members.size(); ++m)
        acc.add_member_product(a[m], b[m], ab_mean, w[m]);
    return acc.finalize(ens.frame_dt(), ens.volume, label);
}

} // namespace ghostflow::corr
