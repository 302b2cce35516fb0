#include "ghostflow/nulltests.hpp"

#include <cmath>

#include "ghostflow/errors.hpp"

namespace ghostflow::corr {

namespace {

// shared-pick bootstrap of a linear combination of fixed-window integrals
struct ComboTerm {
    const CorrelationAccumulator* acc;
    double weight;
};

MeanErr bootstrap_combo(const std::vector<ComboTerm>& terms, std::size_t cut, double frame_dt,
                        double volume, int n_boot, Rng& rng) {
    const std::size_t nm = terms.front().acc->n_members();
    std::vector<std::size_t> all(nm);
    for (std::size_t i = 0; i < nm; ++i) all[i] = i;
    auto eval = [&](const std::vector<std::size_t>& pick) {
        double v = 0.0;
        for (const auto& t : terms)
            v += t.weight * integrate_fixed(t.acc->finalize_subset(pick, frame_dt, volume), cut);
        return v;
    };
    MeanErr out;
    out.mean = eval(all);
    out.n = nm;
    if (nm >= 4 && n_boot > 0) {
        double s = 0.0, s2 = 0.0;
        std::vector<std::size_t> pick(nm);
        for (int b = 0; b < n_boot; ++b) {
            for (auto& v : pick) v = rng.uniform_index(nm);
            const double val = eval(pick);
            s += val;
            s2 += val * val;
        }
        const double m = s / n_boot;
        out.stderr_ = std::sqrt(std::max(s2 / n_boot - m * m, 0.0));
    }
    return out;
}

CorrelationAccumulator make_accum(const Ensemble& ens, const Series& a, const Series& b,
                                  std::size_t max_lag) {
    CorrelationAccumulator acc(max_lag);
    for (std::size_t m = 0; m < ens.members.size(); ++m) acc.add_member(a[m], b[m]);
    return acc;
}

} // namespace

GalileanReport galilean_null_test(const Ensemble& ens, const ProjectionBasis& basis,
                                  double temperature, std::size_t max_lag,
                                  const PlateauRule& rule, int n_boot, std::uint64_t seed) {
    GalileanReport rep;
    Rng rng(seed);
    const double fdt = ens.frame_dt();

    const Series wbar12 = subtract_slow_modes(ens, ex_wstar(0, 1), basis);
    const auto c_shear = time_correlation_series(ens, wbar12, wbar12, max_lag, "wbar12.wbar12");
    const auto shear_int = integrate_correlation(c_shear, rule);
    const std::size_t cut = std::max<std::size_t>(shear_int.window_lags, 2);
    rep.window_lags = cut;

    auto add_row = [&](const std::string& name, const MeanErr& me) {
        NullTestRow row;
        row.name = name;
        row.value = me.mean;
        row.stderr_ = me.stderr_;
        row.sigma_distance = me.stderr_ > 0 ? std::fabs(me.mean) / me.stderr_ : 0.0;
        row.pass = std::fabs(me.mean) <= 3.0 * me.stderr_;
        rep.rows.push_back(row);
    };

    // identity route: momentum field against the subtracted current
    for (int g = 0; g < ens.dim; ++g) {
        const Series zg = centered(extract_series(ens, ex_z(1 + g)));
        auto acc = make_accum(ens, zg, wbar12, max_lag);
        add_row("int dtau <w0" + std::to_string(g + 1) + ", wbar12>",
                bootstrap_combo({{&acc, 1.0}}, cut, fdt, ens.volume, n_boot, rng));
    }

    // boost-derivative combination: (1/T) <(z w^{d+1 g}) L^-1 wbar> +
    // <w^{mu g} L^-1 wbar> = 0
    const std::vector<std::pair<int, int>> mg = {{0, 1}, {1, 0}};
    for (auto [mu, g] : mg) {
        const Series vwe = centered(extract_series(ens, ex_v_we(mu, g)));
        const Series wmg = subtract_slow_modes(ens, ex_wstar(mu, g), basis);
        auto acc1 = make_accum(ens, vwe, wbar12, max_lag);
        auto acc2 = make_accum(ens, wmg, wbar12, max_lag);
        add_row("boost combo (" + std::to_string(mu + 1) + std::to_string(g + 1) + "|12)",
                bootstrap_combo({{&acc1, 1.0 / temperature}, {&acc2, 1.0}}, cut, fdt,
                                ens.volume, n_boot, rng));
    }

    rep.all_pass = true;
    for (const auto& r : rep.rows) rep.all_pass = rep.all_pass && r.pass;
    return rep;
}

namespace {

// (1/V) sample covariance of two centered per-member series with a member
// bootstrap error
MeanErr static_cov(const Ensemble& ens, const Series& a, const Series& b, int n_boot, Rng& rng) {
    const std::size_t nm = ens.members.size();
    std::vector<double> dots(nm, 0.0);
    std::vector<long> counts(nm, 0);
    for (std::size_t m = 0; m < nm; ++m) {
        for (std::size_t t = 0; t < a[m].size(); ++t) dots[m] += a[m][t] * b[m][t];
        counts[m] = static_cast<long>(a[m].size());
    }
    auto eval = [&](const std::vector<std::size_t>& pick) {
        double s = 0.0;
        long c = 0;
        for (std::size_t idx : pick) {
            s += dots[idx];
            c += counts[idx];
        }
        return s / (static_cast<double>(c) * ens.volume);
    };
    std::vector<std::size_t> all(nm);
    for (std::size_t i = 0; i < nm; ++i) all[i] = i;
    MeanErr out;
    out.mean = eval(all);
    out.n = nm;
    if (nm >= 4 && n_boot > 0) {
        double s = 0.0, s2 = 0.0;
        std::vector<std::size_t> pick(nm);
        for (int b = 0; b < n_boot; ++b) {
            for (auto& v : pick) v = rng.uniform_index(nm);
            const double val = eval(pick);
            s += val;
            s2 += val * val;
        }
        const double m = s / n_boot;
        out.stderr_ = std::sqrt(std::max(s2 / n_boot - m * m, 0.0));
    }
    return out;
}

} // namespace

CompatibilityReport compatibility_residuals(const Ensemble& ens, const ProjectionBasis& basis,
                                            double rho, double temperature, double e, double p,
                                            int n_boot, std::uint64_t seed) {
    CompatibilityReport rep;
    Rng rng(seed);
    const int d = ens.dim;

    auto add_row = [&](const std::string& name, const MeanErr& me, double target) {
        SumRuleRow row;
        row.name = name;
        row.measured = me.mean;
        row.target = target;
        row.stderr_ = me.stderr_;
        row.sigma_distance = me.stderr_ > 0 ? std::fabs(me.mean - target) / me.stderr_ : 0.0;
        row.pass = std::fabs(me.mean - target) <= 3.0 * std::max(me.stderr_, 1e-300);
        rep.rows.push_back(row);
    };

    std::vector<Series> zmom(static_cast<std::size_t>(d)), we(static_cast<std::size_t>(d)),
        we_slow(static_cast<std::size_t>(d));
    for (int g = 0; g < d; ++g) {
        zmom[static_cast<std::size_t>(g)] = centered(extract_series(ens, ex_z(1 + g)));
        Series raw = extract_series(ens, ex_w_energy(g));
        we[static_cast<std::size_t>(g)] = centered(raw);
        we_slow[static_cast<std::size_t>(g)] = basis.project_series(ens, raw);
    }

    const double tgt_mom = rho * temperature;
    const double tgt_cross = temperature * (rho * e + p);
    const double tgt_slow = temperature * (rho * e + p) * (rho * e + p) / rho;
    for (int nu = 0; nu < d; ++nu)
        for (int g = nu; g < d; ++g) {
            const double delta = (nu == g) ? 1.0 : 0.0;
            add_row("<w0" + std::to_string(nu + 1) + " w0" + std::to_string(g + 1) + ">",
                    static_cov(ens, zmom[static_cast<std::size_t>(nu)],
                               zmom[static_cast<std::size_t>(g)], n_boot, rng),
                    tgt_mom * delta);
            add_row("<w0" + std::to_string(nu + 1) + " wE" + std::to_string(g + 1) + ">",
                    static_cov(ens, zmom[static_cast<std::size_t>(nu)],
                               we[static_cast<std::size_t>(g)], n_boot, rng),
                    tgt_cross * delta);
            add_row("slow<wE" + std::to_string(nu + 1) + " wE" + std::to_string(g + 1) + ">",
                    static_cov(ens, we_slow[static_cast<std::size_t>(nu)],
                               we_slow[static_cast<std::size_t>(g)], n_boot, rng),
                    tgt_slow * delta);
        }

    // momentum-current cross correlations with the odd currents vanish
    const Series wstar01 = centered(extract_series(ens, ex_wstar(0, 1)));
    const Series wstar00 = centered(extract_series(ens, ex_wstar(0, 0)));
    add_row("<w*12 w01>", static_cov(ens, wstar01, zmom[0], n_boot, rng), 0.0);
    add_row("<w*12 wE1>", static_cov(ens, wstar01, we[0], n_boot, rng), 0.0);
    add_row("<w*11 w01>", static_cov(ens, wstar00, zmom[0], n_boot, rng), 0.0);
    add_row("<w*11 wE1>", static_cov(ens, wstar00, we[0], n_boot, rng), 0.0);

    rep.all_pass = true;
    for (const auto& r : rep.rows) rep.all_pass = rep.all_pass && r.pass;
    return rep;
}

std::vector<IdentityCheckRow> thermo_identity_check(const eos::StateEquationTable& table,
                                                    int n_points, Rng& rng) {
    std::vector<IdentityCheckRow> rows;
    const double rho_lo = table.rho_pts.front(), rho_hi = table.rho_pts.back();
    const double t_lo = table.t_pts.front(), t_hi = table.t_pts.back();
    const double dt_grid = (t_hi - t_lo) / static_cast<double>(table.t_pts.size() - 1);
    for (int k = 0; k < n_points; ++k) {
        IdentityCheckRow row;
        // stay inside the grid so the constant-P path cannot leave it
        row.rho = rho_lo + (0.25 + 0.5 * rng.uniform()) * (rho_hi - rho_lo);
        row.temperature = t_lo + (0.25 + 0.5 * rng.uniform()) * (t_hi - t_lo);
        const double rho = row.rho, t = row.temperature;
        const auto ld = eos::lambda_derivatives_const_p(table, rho, t,
                                                        std::min(1e-3, 0.05 * dt_grid));
        const double e = table.energy(rho, t);
        const double p = table.pressure(rho, t);
        row.residual = ld.l0_prime * rho + (rho * e + p) / (t * t);

        const double sig_p = std::fabs(table.pressure_err(rho, t));
        const double sig_e = std::fabs(table.energy_err(rho, t));
        const double sig_l0 = std::sqrt(std::pow((sig_p + rho * sig_e) / (rho * t), 2) +
                                        table.path_error_estimate * table.path_error_estimate);
        const double sig_l0p = std::sqrt(2.0) * sig_l0 / dt_grid;
        row.propagated_error = std::sqrt(std::pow(rho * sig_l0p, 2) +
                                         std::pow((rho * sig_e + sig_p) / (t * t), 2));
        row.pass = std::fabs(row.residual) <= 3.0 * row.propagated_error;
        rows.push_back(row);
    }
    return rows;
}

} // namespace ghostflow::corr
