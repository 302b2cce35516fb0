#include "ghostflow/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include "ghostflow/errors.hpp"
#include "ghostflow/projector.hpp"

namespace ghostflow::pipeline {

namespace {

corr::MemberSeries run_member(const EquilibriumRunConfig& cfg, int member) {
    md::TorusDomain dom;
    dom.dim = cfg.dim;
    dom.side = cfg.side;
    dom.cell_cutoff = cfg.pot.range;
    dom.validate();

    Rng rng(cfg.seed, static_cast<std::uint64_t>(member) + 1);
    // grand-canonical initial conditions: the particle count fluctuates
    // across members (the Gibbs state is grand canonical) but each
    // Hamiltonian trajectory keeps its own N fixed
    const double lam0 =
        std::log(static_cast<double>(cfg.n_particles) / dom.volume());
    auto params = gibbs::GibbsParameters::global(cfg.dim, cfg.eps, cfg.eps * cfg.side, lam0,
                                                 cfg.temperature);
    gibbs::McmcOptions mo;
    mo.fixed_n = false;
    mo.n_init = cfg.n_particles;
    auto sampled = gibbs::sample_local_gibbs(params, dom, cfg.pot, cfg.sampler_sweeps, rng, mo);

    corr::MemberSeries series;
    series.frame_dt = cfg.dt * static_cast<double>(cfg.save_every);
    md::VerletIntegrator integ(std::move(sampled.state), cfg.pot, dom);
    series.frames.push_back(fields::current_totals(integ.state(), cfg.pot, dom));
    for (long s = 0; s < cfg.steps; s += cfg.save_every) {
        integ.run(cfg.dt, cfg.save_every);
        series.frames.push_back(fields::current_totals(integ.state(), cfg.pot, dom));
    }
    return series;
}

} // namespace

corr::Ensemble run_equilibrium_ensemble(const EquilibriumRunConfig& cfg) {
    corr::Ensemble ens;
    ens.dim = cfg.dim;
    {
        md::TorusDomain dom;
        dom.dim = cfg.dim;
        dom.side = cfg.side;
        ens.volume = dom.volume();
    }
    ens.members.resize(static_cast<std::size_t>(cfg.members));
    if (cfg.threads <= 1) {
        for (int m = 0; m < cfg.members; ++m)
            ens.members[static_cast<std::size_t>(m)] = run_member(cfg, m);
        return ens;
    }
    std::vector<std::thread> pool;
    std::size_t next = 0;
    const std::size_t total = static_cast<std::size_t>(cfg.members);
    std::mutex mtx;
    for (int t = 0; t < cfg.threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t mine;
                {
                    std::lock_guard<std::mutex> lk(mtx);
                    if (next >= total) return;
                    mine = next++;
                }
                ens.members[mine] = run_member(cfg, static_cast<int>(mine));
            }
        });
    }
    for (auto& th : pool) th.join();
    return ens;
}

CoefficientSet compute_coefficients(const corr::Ensemble& ens, double temperature,
                                    const eos::EquationOfState& eos_ref,
                                    const CoefficientOptions& opts) {
    const int d = ens.dim;
    CoefficientSet out;
    out.temperature = temperature;

    auto basis = corr::build_projector(ens);
    out.condition_number = basis.condition_number;
    out.rho = basis.z_mean[0] / ens.volume;
    out.energy_per_mass = basis.z_mean[static_cast<std::size_t>(d) + 1] / basis.z_mean[0];
    out.pressure = eos_ref.pressure(out.rho, temperature);

    // shear: average over the independent off-diagonal channels
    corr::CorrelationAccumulator shear_acc(opts.max_lag);
    for (int b = 0; b < d; ++b)
        for (int k = b + 1; k < d; ++k) {
            auto wbar = corr::subtract_slow_modes(ens, corr::ex_wstar(b, k), basis);
            for (std::size_t m = 0; m < ens.members.size(); ++m)
                shear_acc.add_member(wbar[m], wbar[m]);
        }
    auto c_shear = shear_acc.finalize(ens.frame_dt(), ens.volume, "shear");
    out.eta = corr::green_kubo_shear(c_shear, temperature, opts.rule);

    // bulk: trace channel
    corr::Series trace(ens.members.size());
    for (int b = 0; b < d; ++b) {
        auto wbar = corr::subtract_slow_modes(ens, corr::ex_wstar(b, b), basis);
        for (std::size_t m = 0; m < ens.members.size(); ++m) {
            if (trace[m].empty()) trace[m].assign(wbar[m].size(), 0.0);
            for (std::size_t t = 0; t < wbar[m].size(); ++t) trace[m][t] += wbar[m][t];
        }
    }
    auto c_trace = corr::time_correlation_series(ens, trace, trace, opts.max_lag, "trace");
    out.zeta = corr::green_kubo_bulk(c_trace, temperature, d, opts.rule);

    // isotropy reduction and the (c', eta) reconstruction of zeta
    std::vector<corr::CorrelationSeries> tensor_channels;
    {
        std::vector<corr::Series> wbar(static_cast<std::size_t>(d * d));
        for (int b = 0; b < d; ++b)
            for (int k = 0; k < d; ++k)
                wbar[static_cast<std::size_t>(b * d + k)] =
                    corr::subtract_slow_modes(ens, corr::ex_wstar(b, k), basis);
        for (int mu = 0; mu < d; ++mu)
            for (int l = 0; l < d; ++l)
                for (int b = 0; b < d; ++b)
                    for (int k = 0; k < d; ++k)
                        tensor_channels.push_back(corr::time_correlation_series(
                            ens, wbar[static_cast<std::size_t>(mu * d + l)],
                            wbar[static_cast<std::size_t>(b * d + k)], opts.max_lag,
                            "w" + std::to_string(mu + 1) + std::to_string(l + 1) + ".w" +
                                std::to_string(b + 1) + std::to_string(k + 1)));
    }
    auto iso = corr::isotropy_decompose(tensor_channels, d);
    auto cp_int = corr::integrate_correlation(iso.c_prime, opts.rule);
    out.zeta_reconstructed = cp_int;
    out.zeta_reconstructed.value =
        cp_int.value / (2.0 * temperature) + (2.0 / d) * out.eta.value;
    out.zeta_reconstructed.stderr_ = std::sqrt(
        std::pow(cp_int.stderr_ / (2.0 * temperature), 2) +
        std::pow((2.0 / d) * out.eta.stderr_, 2));

    // conductivity, projected route
    corr::Series esum(ens.members.size());
    corr::Series esum_raw(ens.members.size());
    {
        corr::CorrelationAccumulator kacc(opts.max_lag), kacc_raw(opts.max_lag);
        for (int k = 0; k < d; ++k) {
            auto wbar = corr::subtract_slow_modes(ens, corr::ex_w_energy(k), basis);
            auto raw = corr::centered(corr::extract_series(ens, corr::ex_w_energy(k)));
            for (std::size_t m = 0; m < ens.members.size(); ++m) {
                kacc.add_member(wbar[m], wbar[m]);
                kacc_raw.add_member(raw[m], raw[m]);
            }
        }
        // summing channels: accumulate per channel then scale by d below
        auto c_proj = kacc.finalize(ens.frame_dt(), ens.volume, "energy_proj");
        auto c_raw = kacc_raw.finalize(ens.frame_dt(), ens.volume, "energy_raw");
        // the accumulators averaged over d channels; the kappa formula wants
        // the channel sum
        for (auto& v : c_proj.value) v *= d;
        for (auto& v : c_proj.stderr_) v *= d;
        for (auto& v : c_raw.value) v *= d;
        for (auto& v : c_raw.stderr_) v *= d;
        out.kappa = corr::green_kubo_conductivity(c_proj, temperature, out.rho,
                                                  out.energy_per_mass, out.pressure, d,
                                                  /*raw_route=*/false, opts.rule);
        out.kappa_raw_route = corr::green_kubo_conductivity(
            c_raw, temperature, out.rho, out.energy_per_mass, out.pressure, d,
            /*raw_route=*/true, opts.rule);
    }

    // static and double-time thermal-stress coefficients
    const auto ld = eos::lambda_derivatives_const_p(eos_ref, out.rho, temperature);
    out.statics = corr::static_y_coefficients(ens, ld);
    if (opts.with_double_time)
        out.double_time = corr::double_time_coefficients(ens, basis, opts.max_lag, opts.rule);
    out.assembled = corr::assemble_thermal_stress(out.statics, out.double_time, ld, temperature);
    return out;
}

void CoefficientSet::write_csv(const std::string& path) const {
    std::ofstream outf(path);
    if (!outf) throw config_error("cannot open for writing: " + path);
    outf << "name,value,stderr,window,flags\n";
    outf.precision(12);
    auto row = [&](const std::string& name, const corr::GkResult& r) {
        outf << name << ',' << r.value << ',' << r.stderr_ << ',' << r.window_time << ','
             << (r.flag.empty() ? "ok" : r.flag) << "\n";
    };
    row("eta", eta);
    row("zeta", zeta);
    row("zeta_reconstructed", zeta_reconstructed);
    row("kappa", kappa);
    row("kappa_raw_route", kappa_raw_route);
    auto srow = [&](const std::string& name, double v, double err) {
        outf << name << ',' << v << ',' << err << ",," << "ok" << "\n";
    };
    srow("Y1", statics.y1, statics.y1_err);
    srow("Y2", statics.y2, statics.y2_err);
    srow("omega1_bar", statics.w1_bar, statics.w1_err);
    srow("omega2_bar", statics.w2_bar, statics.w2_err);
    row("a1", double_time.a1);
    row("a2", double_time.a2);
    row("b1", double_time.b1);
    row("b2", double_time.b2);
    row("c1", double_time.c1);
    row("c2", double_time.c2);
    row("d1", double_time.d1);
    row("d2", double_time.d2);
    row("h1", double_time.h1);
    row("h2", double_time.h2);
    row("g1", double_time.g1);
    row("g2", double_time.g2);
    row("f1", double_time.f1);
    const std::string rel = assembled.reliable ? "ok" : "unreliable";
    outf << "Z1," << assembled.z1 << ",,," << rel << "\n";
    outf << "Z2," << assembled.z2 << ",,," << rel << "\n";
    outf << "phi1," << assembled.phi1 << ",,," << rel << "\n";
    outf << "phi2," << assembled.phi2 << ",,," << rel << "\n";
    outf << "K1," << assembled.k1 << ",,," << rel << "\n";
    outf << "K2," << assembled.k2 << ",,," << rel << "\n";
    outf << "omega1," << assembled.omega1 << ",,," << rel << "\n";
    outf << "omega2," << assembled.omega2 << ",,," << rel << "\n";
    outf << "rho," << rho << ",,,ok\n";
    outf << "T," << temperature << ",,,ok\n";
    outf << "e," << energy_per_mass << ",,,ok\n";
    outf << "P," << pressure << ",,,ok\n";
}

void write_correlation_csv(const std::string& path,
                           const std::vector<corr::CorrelationSeries>& series) {
    std::ofstream outf(path);
    if (!outf) throw config_error("cannot open for writing: " + path);
    outf << "channel,tau,value,count\n";
    outf.precision(12);
    for (const auto& s : series)
        for (std::size_t lag = 0; lag < s.value.size(); ++lag)
            outf << s.label << ',' << s.lag_time[lag] << ',' << s.value[lag] << ','
                 << s.count[lag] << "\n";
}

} // namespace ghostflow::pipeline
