#include "ghostflow/appendix_coeffs.hpp"

#include <cmath>

#include "ghostflow/errors.hpp"

namespace ghostflow::corr {

namespace {

// per-member sums needed for the static correlators
struct StaticPartials {
    // [channel]: channels are (alpha,beta) pairs of the Phi tensor
    std::vector<double> cov_z0;   // sum dZ0 dPhi
    std::vector<double> cov_ze;   // sum dZE dPhi
    std::vector<double> m3_00;    // sum dZ0 dZ0 dPhi
    std::vector<double> m3_0e;    // sum dZ0 dZE dPhi
    std::vector<double> m3_ee;    // sum dZE dZE dPhi
    long frames = 0;
};

struct StaticEstimate {
    double y1 = 0.0, y2 = 0.0, w1 = 0.0, w2 = 0.0;
};

StaticEstimate evaluate_static(const std::vector<StaticPartials>& parts,
                               const std::vector<std::size_t>& pick, int dim, double volume,
                               const eos::LambdaDerivatives& ld,
                               const std::vector<std::pair<int, int>>& off_channels,
                               const std::vector<int>& diag_channels) {
    const std::size_t nch = off_channels.size() + diag_channels.size();
    std::vector<double> cz0(nch, 0.0), cze(nch, 0.0), m00(nch, 0.0), m0e(nch, 0.0),
        mee(nch, 0.0);
    long frames = 0;
    for (std::size_t idx : pick) {
        const auto& p = parts[idx];
        for (std::size_t ch = 0; ch < nch; ++ch) {
            cz0[ch] += p.cov_z0[ch];
            cze[ch] += p.cov_ze[ch];
            m00[ch] += p.m3_00[ch];
            m0e[ch] += p.m3_0e[ch];
            mee[ch] += p.m3_ee[ch];
        }
        frames += p.frames;
    }
    const double norm = 1.0 / (static_cast<double>(frames) * volume);
    StaticEstimate out;
    const std::size_t noff = off_channels.size();
    double y2 = 0.0, y1 = 0.0;
    for (std::size_t ch = 0; ch < noff; ++ch) {
        y2 += ld.l0_prime * cz0[ch] * norm + ld.le_prime * cze[ch] * norm;
        y1 += ld.l0_double_prime * cz0[ch] * norm + ld.le_double_prime * cze[ch] * norm +
              ld.l0_prime * ld.l0_prime * m00[ch] * norm +
              2.0 * ld.l0_prime * ld.le_prime * m0e[ch] * norm +
              ld.le_prime * ld.le_prime * mee[ch] * norm;
    }
    out.y2 = y2 / (6.0 * static_cast<double>(noff));
    out.y1 = y1 / (6.0 * static_cast<double>(noff));
    double w2 = 0.0, w1 = 0.0;
    for (std::size_t k = 0; k < diag_channels.size(); ++k) {
        const std::size_t ch = noff + k;
        w2 += ld.l0_prime * cz0[ch] * norm + ld.le_prime * cze[ch] * norm;
        w1 += ld.l0_double_prime * cz0[ch] * norm + ld.le_double_prime * cze[ch] * norm +
              ld.l0_prime * ld.l0_prime * m00[ch] * norm +
              2.0 * ld.l0_prime * ld.le_prime * m0e[ch] * norm +
              ld.le_prime * ld.le_prime * mee[ch] * norm;
    }
    out.w2 = w2 / (6.0 * static_cast<double>(dim));
    out.w1 = w1 / (6.0 * static_cast<double>(dim));
    return out;
}

} // namespace

StaticYResult static_y_coefficients(const Ensemble& ens, const eos::LambdaDerivatives& ld,
                                    int n_boot, std::uint64_t seed) {
    const int d = ens.dim;
    if (ens.members.empty()) throw config_error("static_y_coefficients: empty ensemble");

    std::vector<std::pair<int, int>> off_channels;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (a != b) off_channels.emplace_back(a, b);
    std::vector<int> diag_channels;
    for (int g = 0; g < d; ++g) diag_channels.push_back(g);
    const std::size_t nch = off_channels.size() + diag_channels.size();

    // ensemble means
    double mz0 = 0.0, mze = 0.0;
    std::vector<double> mphi(nch, 0.0);
    long frames = 0;
    auto phi_of = [&](const fields::CurrentTotals& f, std::size_t ch) {
        if (ch < off_channels.size())
            return f.phi_ab[off_channels[ch].first][off_channels[ch].second];
        const int g = diag_channels[ch - off_channels.size()];
        return f.phi_ab[g][g];
    };
    for (const auto& m : ens.members)
        for (const auto& f : m.frames) {
            mz0 += f.z[0];
            mze += f.z[d + 1];
            for (std::size_t ch = 0; ch < nch; ++ch) mphi[ch] += phi_of(f, ch);
            ++frames;
        }
    mz0 /= frames;
    mze /= frames;
    for (auto& v : mphi) v /= frames;

    std::vector<StaticPartials> parts(ens.members.size());
    for (std::size_t mem = 0; mem < ens.members.size(); ++mem) {
        auto& p = parts[mem];
        p.cov_z0.assign(nch, 0.0);
        p.cov_ze.assign(nch, 0.0);
        p.m3_00.assign(nch, 0.0);
        p.m3_0e.assign(nch, 0.0);
        p.m3_ee.assign(nch, 0.0);
        for (const auto& f : ens.members[mem].frames) {
            const double dz0 = f.z[0] - mz0;
            const double dze = f.z[d + 1] - mze;
            for (std::size_t ch = 0; ch < nch; ++ch) {
                const double dphi = phi_of(f, ch) - mphi[ch];
                p.cov_z0[ch] += dz0 * dphi;
                p.cov_ze[ch] += dze * dphi;
                p.m3_00[ch] += dz0 * dz0 * dphi;
                p.m3_0e[ch] += dz0 * dze * dphi;
                p.m3_ee[ch] += dze * dze * dphi;
            }
            ++p.frames;
        }
    }

    std::vector<std::size_t> all(parts.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto est = evaluate_static(parts, all, d, ens.volume, ld, off_channels, diag_channels);

    StaticYResult out;
    out.y1 = est.y1;
    out.y2 = est.y2;
    out.w1_bar = est.w1;
    out.w2_bar = est.w2;

    if (parts.size() >= 4 && n_boot > 0) {
        Rng rng(seed);
        double a1 = 0, a2 = 0, b1 = 0, b2 = 0, c1 = 0, c2 = 0, e1 = 0, e2 = 0;
        for (int b = 0; b < n_boot; ++b) {
            std::vector<std::size_t> pick(parts.size());
            for (auto& v : pick) v = rng.uniform_index(parts.size());
            const auto e = evaluate_static(parts, pick, d, ens.volume, ld, off_channels,
                                           diag_channels);
            a1 += e.y1;
            a2 += e.y1 * e.y1;
            b1 += e.y2;
            b2 += e.y2 * e.y2;
            c1 += e.w1;
            c2 += e.w1 * e.w1;
            e1 += e.w2;
            e2 += e.w2 * e.w2;
        }
        auto sd = [&](double s, double s2) {
            const double m = s / n_boot;
            return std::sqrt(std::max(s2 / n_boot - m * m, 0.0));
        };
        out.y1_err = sd(a1, a2);
        out.y2_err = sd(b1, b2);
        out.w1_err = sd(c1, c2);
        out.w2_err = sd(e1, e2);
    }
    return out;
}

namespace {

// fit tensor integrals I^{g n, b k} onto
//   x1 d_{bk} d_{gn} + x2 (d_{bn} d_{gk} + d_{bg} d_{nk})
// channels indexed [((g*d + n)*d + b)*d + k]
void fit_patterns(const std::vector<GkResult>& integrals, int dim, GkResult& x1, GkResult& x2) {
    const std::size_t d = static_cast<std::size_t>(dim);
    SmallMat design(d * d * d * d, 2);
    std::vector<double> y(d * d * d * d);
    std::vector<double> sig(d * d * d * d);
    bool converged = true;
    std::size_t row = 0;
    for (std::size_t g = 0; g < d; ++g)
        for (std::size_t n = 0; n < d; ++n)
            for (std::size_t b = 0; b < d; ++b)
                for (std::size_t k = 0; k < d; ++k, ++row) {
                    design(row, 0) = (b == k && g == n) ? 1.0 : 0.0;
                    design(row, 1) = ((b == n && g == k) ? 1.0 : 0.0) +
                                     ((b == g && n == k) ? 1.0 : 0.0);
                    y[row] = integrals[row].value;
                    sig[row] = integrals[row].stderr_;
                    converged = converged && integrals[row].converged;
                }
    const auto fit = least_squares(design, y);
    // variance via the unweighted pseudo-inverse rows
    SmallMat ata(2, 2);
    for (std::size_t r = 0; r < y.size(); ++r)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) ata(i, j) += design(r, i) * design(r, j);
    SmallMat inv = invert(ata);
    double var1 = 0.0, var2 = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r) {
        double w1 = 0.0, w2 = 0.0;
        for (std::size_t j = 0; j < 2; ++j) {
            w1 += inv(0, j) * design(r, j);
            w2 += inv(1, j) * design(r, j);
        }
        var1 += w1 * w1 * sig[r] * sig[r];
        var2 += w2 * w2 * sig[r] * sig[r];
    }
    x1.value = fit[0];
    x2.value = fit[1];
    x1.stderr_ = std::sqrt(var1);
    x2.stderr_ = std::sqrt(var2);
    x1.converged = x2.converged = converged;
    if (!converged) x1.flag = x2.flag = "non-converged";
    double wt = 0.0, wl = 0.0;
    for (const auto& r : integrals) {
        wt = std::max(wt, r.window_time);
        wl = std::max(wl, static_cast<double>(r.window_lags));
    }
    x1.window_time = x2.window_time = wt;
    x1.window_lags = x2.window_lags = static_cast<std::size_t>(wl);
}

} // namespace

DoubleTimeCoefficients double_time_coefficients(const Ensemble& ens,
                                                const ProjectionBasis& basis,
                                                std::size_t max_lag, const PlateauRule& rule) {
    const int d = ens.dim;

    // subtracted momentum-current series, one per (beta, k)
    std::vector<Series> wbar(static_cast<std::size_t>(d * d));
    for (int b = 0; b < d; ++b)
        for (int k = 0; k < d; ++k)
            wbar[static_cast<std::size_t>(b * d + k)] =
                subtract_slow_modes(ens, ex_wstar(b, k), basis);

    // raw legs
    std::vector<Series> leg_w0(static_cast<std::size_t>(d)), leg_we(static_cast<std::size_t>(d));
    for (int g = 0; g < d; ++g) {
        leg_w0[static_cast<std::size_t>(g)] = extract_series(ens, ex_z(1 + g));
        leg_we[static_cast<std::size_t>(g)] = extract_series(ens, ex_w_energy(g));
    }

    auto three_current_family = [&](const std::vector<Series>& legA,
                                    const std::vector<Series>& legB) {
        std::vector<GkResult> integrals(static_cast<std::size_t>(d * d * d * d));
        for (int g = 0; g < d; ++g)
            for (int n = 0; n < d; ++n)
                for (int b = 0; b < d; ++b)
                    for (int k = 0; k < d; ++k) {
                        auto c3 = three_current_correlation(
                            ens, legA[static_cast<std::size_t>(g)],
                            legB[static_cast<std::size_t>(n)],
                            wbar[static_cast<std::size_t>(b * d + k)], max_lag);
                        integrals[static_cast<std::size_t>(((g * d + n) * d + b) * d + k)] =
                            integrate_correlation(c3, rule, /*weight_tau=*/true);
                    }
        return integrals;
    };

    auto two_current_family = [&](const std::function<Extractor(int, int)>& legof,
                                  bool subtract_leg) {
        std::vector<GkResult> integrals(static_cast<std::size_t>(d * d * d * d));
        for (int g = 0; g < d; ++g)
            for (int n = 0; n < d; ++n) {
                Series leg = subtract_leg
                                 ? subtract_slow_modes(ens, legof(g, n), basis)
                                 : centered(extract_series(ens, legof(g, n)));
                for (int b = 0; b < d; ++b)
                    for (int k = 0; k < d; ++k) {
                        auto c2 = time_correlation_series(
                            ens, leg, wbar[static_cast<std::size_t>(b * d + k)], max_lag);
                        integrals[static_cast<std::size_t>(((g * d + n) * d + b) * d + k)] =
                            integrate_correlation(c2, rule, /*weight_tau=*/true);
                    }
            }
        return integrals;
    };

    DoubleTimeCoefficients out;
    fit_patterns(three_current_family(leg_w0, leg_we), d, out.a1, out.a2);
    fit_patterns(three_current_family(leg_w0, leg_w0), d, out.b1, out.b2);
    fit_patterns(three_current_family(leg_we, leg_we), d, out.c1, out.c2);
    fit_patterns(two_current_family(ex_d_leg, false), d, out.d1, out.d2);
    fit_patterns(two_current_family([](int n, int g) { return ex_wstar(n, g); }, true), d,
                 out.h1, out.h2);
    fit_patterns(two_current_family(ex_c_cur, false), d, out.g1, out.g2);
    {
        GkResult f2_unused;
        fit_patterns(two_current_family(ex_n_cur, false), d, out.f1, f2_unused);
    }
    out.all_converged = out.a1.converged && out.b1.converged && out.c1.converged &&
                        out.d1.converged && out.h1.converged && out.g1.converged &&
                        out.f1.converged && out.a2.converged && out.b2.converged &&
                        out.c2.converged && out.d2.converged && out.h2.converged &&
                        out.g2.converged;
    return out;
}

AssembledCoefficients assemble_thermal_stress(const StaticYResult& ys,
                                              const DoubleTimeCoefficients& dt,
                                              const eos::LambdaDerivatives& ld,
                                              double temperature) {
    AssembledCoefficients out;
    out.y1 = ys.y1;
    out.y2 = ys.y2;
    out.w1_bar = ys.w1_bar;
    out.w2_bar = ys.w2_bar;
    const double l0p = ld.l0_prime, l0pp = ld.l0_double_prime;
    const double lep = ld.le_prime, lepp = ld.le_double_prime;
    out.z1 = 4.0 * dt.a2.value * l0p * lep + 2.0 * dt.b2.value * l0p * l0p +
             2.0 * dt.c2.value * lep * lep + lepp * (dt.h2.value + 2.0 * dt.d2.value +
                                                     dt.g2.value);
    out.z2 = 2.0 * lep * dt.d2.value + 2.0 * l0p * temperature * dt.h2.value +
             lep * dt.g2.value;
    out.phi1 = l0pp * dt.h1.value + lepp * dt.d1.value + dt.a1.value * lep * l0p +
               dt.b1.value * l0p * l0p + dt.c1.value * lep * lep +
               lepp * (dt.g1.value + dt.f1.value);
    out.phi2 = l0p * dt.h1.value + lep * dt.d1.value + lep * (dt.g1.value + dt.f1.value);
    out.k1 = out.y1 + out.z1;
    out.k2 = out.y2 + out.z2;
    out.omega1 = out.w1_bar + out.phi1;
    out.omega2 = out.w2_bar + out.phi2;
    out.reliable = dt.all_converged;
    return out;
}

} // namespace ghostflow::corr
