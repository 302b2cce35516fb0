#include "ghostflow/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ghostflow/errors.hpp"
#include "ghostflow/stats.hpp"

namespace ghostflow::gibbs {

GibbsParameters GibbsParameters::global(int dim, double eps, double macro_side, double lam0,
                                        double temperature) {
    if (!(temperature > 0.0)) throw config_error("GibbsParameters: need T > 0");
    GibbsParameters p;
    p.mode = Mode::global;
    p.eps = eps;
    p.lambda0 = FieldMap::constant(dim, macro_side, lam0);
    p.lambda_e = FieldMap::constant(dim, macro_side, -1.0 / temperature);
    return p;
}

double GibbsParameters::temperature_at_micro(const Vec& xi) const {
    const double le = lambda_e(macro_of(xi));
    if (!(le < 0.0)) throw config_error("lambda^{d+1} must be negative (T > 0)");
    return -1.0 / le;
}

Vec GibbsParameters::shifted_mean_velocity(const Vec& xi) const {
    Vec m;
    if (!u || eps == 0.0) return m;
    const Vec x = macro_of(xi);
    for (int k = 0; k < 3; ++k) m[k] = eps * (*u)[static_cast<std::size_t>(k)](x);
    return m;
}

namespace {

double beta_at(const GibbsParameters& params, const Vec& xi) {
    return 1.0 / params.temperature_at_micro(xi);
}

} // namespace

double particle_pair_energy(const Vec& p, const std::vector<Vec>& pos, int skip,
                            const GibbsParameters& params, const md::PotentialSpec& pot,
                            const md::TorusDomain& dom) {
    if (pot.is_zero()) return 0.0;
    const double beta_p = beta_at(params, p);
    double u = 0.0;
    for (int j = 0; j < static_cast<int>(pos.size()); ++j) {
        if (j == skip) continue;
        const Vec d = minimum_image(p, pos[static_cast<std::size_t>(j)], dom);
        const double r2 = norm2(d, dom.dim);
        if (r2 >= pot.range * pot.range) continue;
        if (r2 == 0.0) return std::numeric_limits<double>::infinity();
        const double v = pot.value(std::sqrt(r2));
        const double beta_j = beta_at(params, pos[static_cast<std::size_t>(j)]);
        u += v * 0.5 * (beta_p + beta_j);
    }
    return u;
}

double log_config_weight(const std::vector<Vec>& pos, const GibbsParameters& params,
                         const md::PotentialSpec& pot, const md::TorusDomain& dom) {
    double lw = 0.0;
    for (const auto& p : pos) lw += params.lambda0_at_micro(p);
    for (std::size_t i = 0; i < pos.size(); ++i)
        lw -= 0.5 * particle_pair_energy(pos[i], pos, static_cast<int>(i), params, pot, dom);
    return lw;
}

double acceptance_displacement(const std::vector<Vec>& pos, std::size_t i, const Vec& to,
                               const GibbsParameters& params, const md::PotentialSpec& pot,
                               const md::TorusDomain& dom) {
    const double u_old = particle_pair_energy(pos[i], pos, static_cast<int>(i), params, pot, dom);
    const double u_new = particle_pair_energy(to, pos, static_cast<int>(i), params, pot, dom);
    const double dl = params.lambda0_at_micro(to) - params.lambda0_at_micro(pos[i]);
    return std::min(1.0, std::exp(dl - (u_new - u_old)));
}

double acceptance_insert(const std::vector<Vec>& pos, const Vec& at,
                         const GibbsParameters& params, const md::PotentialSpec& pot,
                         const md::TorusDomain& dom) {
    const double u_new = particle_pair_energy(at, pos, -1, params, pot, dom);
    const double lz = params.lambda0_at_micro(at);
    return std::min(1.0,
                    std::exp(lz - u_new) * dom.volume() / static_cast<double>(pos.size() + 1));
}

double acceptance_delete(const std::vector<Vec>& pos, std::size_t i,
                         const GibbsParameters& params, const md::PotentialSpec& pot,
                         const md::TorusDomain& dom) {
    const double u_i = particle_pair_energy(pos[i], pos, static_cast<int>(i), params, pot, dom);
    const double lz = params.lambda0_at_micro(pos[i]);
    return std::min(1.0, std::exp(-lz + u_i) * static_cast<double>(pos.size()) / dom.volume());
}

namespace {

double total_pair_energy(const std::vector<Vec>& pos, const GibbsParameters& params,
                         const md::PotentialSpec& pot, const md::TorusDomain& dom) {
    double u = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i)
        u += 0.5 * particle_pair_energy(pos[i], pos, static_cast<int>(i), params, pot, dom);
    return u;
}

} // namespace

McmcChain::McmcChain(const md::TorusDomain& dom, const md::PotentialSpec& pot,
                     const GibbsParameters& params, McmcOptions opts, Rng rng)
    : dom_(dom), pot_(pot), params_(params), opts_(opts), rng_(rng) {
    dom_.validate();
    // frozen at construction: a state-dependent sweep length would bias
    // observables recorded at sweep boundaries
    moves_per_sweep_ = std::max<long>(static_cast<long>(opts_.n_init), 8);
    pos_.reserve(opts_.n_init + 16);
    for (std::size_t i = 0; i < opts_.n_init; ++i) {
        Vec p;
        for (int k = 0; k < dom_.dim; ++k) p[k] = rng_.uniform(0.0, dom_.side);
        pos_.push_back(p);
    }
}

void McmcChain::sweep() {
    const long attempts = moves_per_sweep_;
    const double delta = opts_.displacement;
    for (long a = 0; a < attempts; ++a) {
        const double sel = opts_.fixed_n ? 0.0 : rng_.uniform();
        if (sel < 0.5) {
            if (pos_.empty()) continue;
            const std::size_t i = rng_.uniform_index(pos_.size());
            Vec to = pos_[i];
            for (int k = 0; k < dom_.dim; ++k)
                to[k] = dom_.wrap(to[k] + rng_.uniform(-delta, delta));
            ++att_[0];
            if (rng_.uniform() < acceptance_displacement(pos_, i, to, params_, pot_, dom_)) {
                pos_[i] = to;
                ++acc_[0];
            }
        } else if (sel < 0.75) {
            Vec at;
            for (int k = 0; k < dom_.dim; ++k) at[k] = rng_.uniform(0.0, dom_.side);
            ++att_[1];
            if (rng_.uniform() < acceptance_insert(pos_, at, params_, pot_, dom_)) {
                pos_.push_back(at);
                ++acc_[1];
            }
        } else {
            ++att_[2];
            if (pos_.empty()) continue;
            const std::size_t i = rng_.uniform_index(pos_.size());
            if (rng_.uniform() < acceptance_delete(pos_, i, params_, pot_, dom_)) {
                pos_[i] = pos_.back();
                pos_.pop_back();
                ++acc_[2];
            }
        }
    }
    energy_series_.push_back(total_pair_energy(pos_, params_, pot_, dom_));
    ++sweeps_;
}

void McmcChain::run(long sweeps) {
    for (long s = 0; s < sweeps; ++s) sweep();
}

SamplerDiagnostics McmcChain::diagnostics() const {
    SamplerDiagnostics d;
    d.sweeps = sweeps_;
    d.attempts = att_[0] + att_[1] + att_[2];
    const long acc_total = acc_[0] + acc_[1] + acc_[2];
    d.acceptance_rate = d.attempts ? static_cast<double>(acc_total) / d.attempts : 0.0;
    d.acc_displacement = att_[0] ? static_cast<double>(acc_[0]) / att_[0] : 0.0;
    d.acc_insert = att_[1] ? static_cast<double>(acc_[1]) / att_[1] : 0.0;
    d.acc_delete = att_[2] ? static_cast<double>(acc_[2]) / att_[2] : 0.0;
    d.energy_autocorr_sweeps = integrated_autocorr_time(energy_series_);
    d.mixing_warning = (acc_total == 0 && d.attempts > 0 && !pot_.is_zero());
    return d;
}

std::pair<std::vector<Vec>, SamplerDiagnostics>
mcmc_positions(const md::TorusDomain& dom, const md::PotentialSpec& pot,
               const GibbsParameters& params, long sweeps, Rng& rng, const McmcOptions& opts) {
    if (sweeps < 1) throw config_error("mcmc_positions: sweeps >= 1 required");
    McmcChain chain(dom, pot, params, opts, rng);
    chain.run(sweeps);
    rng = chain.rng();
    return {chain.positions(), chain.diagnostics()};
}

std::vector<Vec> sample_velocities(const std::vector<Vec>& pos, int dim,
                                   const GibbsParameters& params, Rng& rng) {
    std::vector<Vec> vel(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double t = params.temperature_at_micro(pos[i]);
        const Vec mean = params.shifted_mean_velocity(pos[i]);
        const double sd = std::sqrt(t);
        for (int k = 0; k < dim; ++k) vel[i][k] = mean[k] + sd * rng.normal();
    }
    return vel;
}

LocalGibbsResult sample_local_gibbs(const GibbsParameters& params, const md::TorusDomain& dom,
                                    const md::PotentialSpec& pot, long sweeps, Rng& rng,
                                    const McmcOptions& opts) {
    if (sweeps < 1) throw config_error("sample_local_gibbs: sweeps >= 1 required");
    McmcChain chain(dom, pot, params, opts, rng);

    // Burn-in: sweep in windows until the mean pair energy of two
    // consecutive windows agrees to 1% (bounded by a window budget).
    const long window = 50;
    const long max_windows = 40;
    long burn = 0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (long w = 0; w < max_windows; ++w) {
        chain.run(window);
        burn += window;
        const auto& es = chain.energy_series();
        double m = 0.0;
        for (long s = 0; s < window; ++s) m += es[es.size() - 1 - static_cast<std::size_t>(s)];
        m /= window;
        if (w > 0) {
            const double scale = std::max({std::fabs(m), std::fabs(prev), 1e-9});
            if (std::fabs(m - prev) <= 0.01 * scale) break;
        }
        prev = m;
    }

    chain.run(sweeps);
    rng = chain.rng();
    auto vel = sample_velocities(chain.positions(), dom.dim, params, rng);

    LocalGibbsResult out;
    out.state.dim = dom.dim;
    out.state.box = dom.side;
    out.state.time = 0.0;
    out.state.pos = chain.positions();
    out.state.vel = std::move(vel);
    out.diagnostics = chain.diagnostics();
    out.diagnostics.burn_in_sweeps = burn;
    return out;
}

} // namespace ghostflow::gibbs
