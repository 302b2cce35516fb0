#include "ghostflow/eos.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ghostflow/currents.hpp"
#include "ghostflow/errors.hpp"
#include "ghostflow/forces.hpp"
#include "ghostflow/gibbs.hpp"
#include "ghostflow/stats.hpp"

namespace ghostflow::eos {

double EquationOfState::rho_of_PT(double target_p, double T, double rho_guess, double tol) const {
    double rho = rho_guess;
    for (int it = 0; it < 100; ++it) {
        const double res = pressure(rho, T) - target_p;
        if (std::fabs(res) < tol) return rho;
        const double slope = dP_drho(rho, T);
        if (!(slope > 0.0))
            throw numerical_error("rho_of_PT: dP/drho not positive at rho=" + std::to_string(rho));
        double next = rho - res / slope;
        if (next <= 0.0) next = 0.5 * rho;
        rho = next;
    }
    throw numerical_error("rho_of_PT: Newton did not converge");
}

double EquationOfState::T_of_rhoP(double target_p, double rho, double t_guess, double tol) const {
    double t = t_guess;
    for (int it = 0; it < 100; ++it) {
        const double res = pressure(rho, t) - target_p;
        if (std::fabs(res) < tol) return t;
        const double slope = dP_dT(rho, t);
        if (!(slope > 0.0))
            throw numerical_error("T_of_rhoP: dP/dT not positive at T=" + std::to_string(t));
        double next = t - res / slope;
        if (next <= 0.0) next = 0.5 * t;
        t = next;
    }
    throw numerical_error("T_of_rhoP: Newton did not converge");
}

double IdealGasEos::entropy(double rho, double T) const {
    return 0.5 * dim_ * std::log(T) - std::log(rho);
}

bool StateEquationTable::complete() const {
    for (char ok : point_ok)
        if (!ok) return false;
    return true;
}

namespace {

// centered differences on a (possibly non-uniform) grid
double fd_derivative(const std::vector<double>& x, const std::vector<double>& y, std::size_t i) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    if (i == 0) return (y[1] - y[0]) / (x[1] - x[0]);
    if (i + 1 == n) return (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
    // three-point formula exact for quadratics on non-uniform grids
    return (y[i + 1] * hl * hl - y[i - 1] * hr * hr + y[i] * (hr * hr - hl * hl)) /
           (hl * hr * (hl + hr));
}

} // namespace

void StateEquationTable::finalize() {
    const std::size_t nr = rho_pts.size(), nt = t_pts.size();
    if (nr < 2 || nt < 2) throw config_error("StateEquationTable: need at least a 2x2 grid");
    if (p_vals.size() != nr * nt || e_vals.size() != nr * nt)
        throw config_error("StateEquationTable: value shape mismatch");
    if (p_err.empty()) p_err.assign(nr * nt, 0.0);
    if (e_err.empty()) e_err.assign(nr * nt, 0.0);
    if (point_ok.empty()) point_ok.assign(nr * nt, 1);

    auto at = [&](std::size_t i, std::size_t j) { return i * nt + j; };

    // ds/dT|rho = e_T / T, ds/drho|T = e_rho / T - P/(T rho^2)
    std::vector<double> dsdT(nr * nt, 0.0);
    std::vector<double> dsdr(nr * nt, 0.0);
    std::vector<double> var_dsdT(nr * nt, 0.0), var_dsdr(nr * nt, 0.0);
    for (std::size_t i = 0; i < nr; ++i) {
        std::vector<double> row_e(nt), row_sig(nt);
        for (std::size_t j = 0; j < nt; ++j) row_e[j] = e_vals[at(i, j)];
        for (std::size_t j = 0; j < nt; ++j) {
            const double et = fd_derivative(t_pts, row_e, j);
            dsdT[at(i, j)] = et / t_pts[j];
            const double span = (j == 0          ? t_pts[1] - t_pts[0]
                                 : j + 1 == nt   ? t_pts[nt - 1] - t_pts[nt - 2]
                                                 : t_pts[j + 1] - t_pts[j - 1]);
            const double sig_et = std::sqrt(2.0) *
                                  std::max(e_err[at(i, j)], 1e-300) / span;
            var_dsdT[at(i, j)] = (sig_et / t_pts[j]) * (sig_et / t_pts[j]);
        }
    }
    for (std::size_t j = 0; j < nt; ++j) {
        std::vector<double> col_e(nr);
        for (std::size_t i = 0; i < nr; ++i) col_e[i] = e_vals[at(i, j)];
        for (std::size_t i = 0; i < nr; ++i) {
            const double er = fd_derivative(rho_pts, col_e, i);
            const double rho = rho_pts[i], t = t_pts[j];
            dsdr[at(i, j)] = er / t - p_vals[at(i, j)] / (t * rho * rho);
            const double span = (i == 0        ? rho_pts[1] - rho_pts[0]
                                 : i + 1 == nr ? rho_pts[nr - 1] - rho_pts[nr - 2]
                                               : rho_pts[i + 1] - rho_pts[i - 1]);
            const double sig_er = std::sqrt(2.0) * std::max(e_err[at(i, j)], 1e-300) / span;
            const double sig_p = p_err[at(i, j)] / (t * rho * rho);
            var_dsdr[at(i, j)] = (sig_er / t) * (sig_er / t) + sig_p * sig_p;
        }
    }

    // path A: T-leg at rho_0, then rho-leg; path B: rho-leg at T_0, then
    // T-leg.  Each leg integrates the cubic spline of the integrand exactly.
    std::vector<double> sa(nr * nt, 0.0), sb(nr * nt, 0.0);
    std::vector<double> var_a(nr * nt, 0.0), var_b(nr * nt, 0.0);
    auto t_leg = [&](std::size_t i) {
        std::vector<double> g(nt);
        for (std::size_t j = 0; j < nt; ++j) g[j] = dsdT[at(i, j)];
        return CubicSpline(t_pts, g).cumulative_at_nodes();
    };
    auto rho_leg = [&](std::size_t j) {
        std::vector<double> g(nr);
        for (std::size_t i = 0; i < nr; ++i) g[i] = dsdr[at(i, j)];
        return CubicSpline(rho_pts, g).cumulative_at_nodes();
    };
    {
        auto leg = t_leg(0);
        for (std::size_t j = 0; j < nt; ++j) {
            sa[at(0, j)] = leg[j];
            const double h = (j == 0) ? 0.0 : t_pts[j] - t_pts[j - 1];
            var_a[at(0, j)] = (j == 0 ? 0.0 : var_a[at(0, j - 1)]) +
                              0.25 * h * h * (var_dsdT[at(0, j)] + (j ? var_dsdT[at(0, j - 1)] : 0));
        }
        for (std::size_t j = 0; j < nt; ++j) {
            auto rl = rho_leg(j);
            for (std::size_t i = 0; i < nr; ++i) {
                sa[at(i, j)] = sa[at(0, j)] + rl[i];
                const double h = (i == 0) ? 0.0 : rho_pts[i] - rho_pts[i - 1];
                var_a[at(i, j)] =
                    (i == 0 ? var_a[at(0, j)] : var_a[at(i - 1, j)]) +
                    0.25 * h * h * (var_dsdr[at(i, j)] + (i ? var_dsdr[at(i - 1, j)] : 0));
            }
        }
    }
    {
        auto rl0 = rho_leg(0);
        for (std::size_t i = 0; i < nr; ++i) {
            sb[at(i, 0)] = rl0[i];
            const double h = (i == 0) ? 0.0 : rho_pts[i] - rho_pts[i - 1];
            var_b[at(i, 0)] = (i == 0 ? 0.0 : var_b[at(i - 1, 0)]) +
                              0.25 * h * h * (var_dsdr[at(i, 0)] + (i ? var_dsdr[at(i - 1, 0)] : 0));
        }
        for (std::size_t i = 0; i < nr; ++i) {
            auto tl = t_leg(i);
            for (std::size_t j = 0; j < nt; ++j) {
                sb[at(i, j)] = sb[at(i, 0)] + tl[j];
                const double h = (j == 0) ? 0.0 : t_pts[j] - t_pts[j - 1];
                var_b[at(i, j)] =
                    (j == 0 ? var_b[at(i, 0)] : var_b[at(i, j - 1)]) +
                    0.25 * h * h * (var_dsdT[at(i, j)] + (j ? var_dsdT[at(i, j - 1)] : 0));
            }
        }
    }

    path_discrepancy = 0.0;
    path_error_estimate = 0.0;
    s_vals.assign(nr * nt, 0.0);
    for (std::size_t k = 0; k < nr * nt; ++k) {
        path_discrepancy = std::max(path_discrepancy, std::fabs(sa[k] - sb[k]));
        path_error_estimate =
            std::max(path_error_estimate, std::sqrt(var_a[k] + var_b[k]));
        s_vals[k] = 0.5 * (sa[k] + sb[k]);
    }

    sp_ = Spline2D(rho_pts, t_pts, p_vals);
    se_ = Spline2D(rho_pts, t_pts, e_vals);
    ss_ = Spline2D(rho_pts, t_pts, s_vals);
    sperr_ = Spline2D(rho_pts, t_pts, p_err);
    seerr_ = Spline2D(rho_pts, t_pts, e_err);
}

StateEquationTable StateEquationTable::ideal(int dim, std::vector<double> rho_pts,
                                             std::vector<double> t_pts) {
    IdealGasEos ref(dim);
    StateEquationTable tb;
    tb.dim = dim;
    tb.provenance = "ideal-gas-analytic";
    tb.rho_pts = std::move(rho_pts);
    tb.t_pts = std::move(t_pts);
    const std::size_t nr = tb.rho_pts.size(), nt = tb.t_pts.size();
    tb.p_vals.resize(nr * nt);
    tb.e_vals.resize(nr * nt);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            tb.p_vals[i * nt + j] = ref.pressure(tb.rho_pts[i], tb.t_pts[j]);
            tb.e_vals[i * nt + j] = ref.energy(tb.rho_pts[i], tb.t_pts[j]);
        }
    tb.finalize();
    return tb;
}

void StateEquationTable::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << "rho,T,P,e,s,stderr_P,stderr_e\n";
    out.precision(17);
    const std::size_t nt = t_pts.size();
    for (std::size_t i = 0; i < rho_pts.size(); ++i)
        for (std::size_t j = 0; j < nt; ++j)
            out << rho_pts[i] << ',' << t_pts[j] << ',' << p_vals[i * nt + j] << ','
                << e_vals[i * nt + j] << ',' << s_vals[i * nt + j] << ',' << p_err[i * nt + j]
                << ',' << e_err[i * nt + j] << "\n";
}

StateEquationTable StateEquationTable::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open table: " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<std::array<double, 7>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 7> row{};
        std::stringstream ss(line);
        std::string tok;
        for (double& v : row) {
            if (!std::getline(ss, tok, ',')) throw config_error("bad table row: " + line);
            v = std::stod(tok);
        }
        rows.push_back(row);
    }
    StateEquationTable tb;
    tb.provenance = "measured-from-MD";
    for (const auto& r : rows) {
        if (tb.rho_pts.empty() || r[0] > tb.rho_pts.back()) tb.rho_pts.push_back(r[0]);
        if (tb.rho_pts.size() == 1) tb.t_pts.push_back(r[1]);
    }
    const std::size_t nr = tb.rho_pts.size(), nt = tb.t_pts.size();
    if (rows.size() != nr * nt) throw config_error("table is not rectangular");
    tb.p_vals.resize(nr * nt);
    tb.e_vals.resize(nr * nt);
    tb.p_err.resize(nr * nt);
    tb.e_err.resize(nr * nt);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        tb.p_vals[k] = rows[k][2];
        tb.e_vals[k] = rows[k][3];
        tb.p_err[k] = rows[k][5];
        tb.e_err[k] = rows[k][6];
    }
    tb.finalize();
    return tb;
}

double lambda0_of(const EquationOfState& eos, double rho, double T) {
    return (eos.pressure(rho, T) + rho * eos.energy(rho, T)) / (rho * T) - eos.entropy(rho, T);
}

LambdaDerivatives lambda_derivatives_const_p(const EquationOfState& eos, double rho, double T,
                                             double h) {
    LambdaDerivatives out;
    const double p0 = eos.pressure(rho, T);
    auto l0_at = [&](double t) {
        const double r = eos.rho_of_PT(p0, t, rho);
        return lambda0_of(eos, r, t);
    };
    const double lm = l0_at(T - h), l0 = l0_at(T), lp = l0_at(T + h);
    out.l0_prime = (lp - lm) / (2.0 * h);
    out.l0_double_prime = (lp - 2.0 * l0 + lm) / (h * h);
    out.le_prime = 1.0 / (T * T);
    out.le_double_prime = -2.0 / (T * T * T);
    return out;
}

StateEquationTable tabulate_state_equation(const std::vector<double>& rho_pts,
                                           const std::vector<double>& t_pts,
                                           const md::PotentialSpec& pot,
                                           const TabulateOptions& opts) {
    md::TorusDomain dom;
    dom.dim = opts.dim;
    dom.side = opts.box_side;
    dom.cell_cutoff = pot.range;
    dom.validate();
    const double vol = dom.volume();

    StateEquationTable tb;
    tb.dim = opts.dim;
    tb.provenance = "measured-from-MD";
    tb.t_pts = t_pts;
    // snap densities to realizable N/V
    for (double rho : rho_pts) {
        const auto n = static_cast<std::size_t>(std::lround(rho * vol));
        if (n < 2) throw config_error("tabulate_state_equation: density too low for the box");
        tb.rho_pts.push_back(static_cast<double>(n) / vol);
    }
    const std::size_t nr = tb.rho_pts.size(), nt = tb.t_pts.size();
    tb.p_vals.assign(nr * nt, 0.0);
    tb.e_vals.assign(nr * nt, 0.0);
    tb.p_err.assign(nr * nt, 0.0);
    tb.e_err.assign(nr * nt, 0.0);
    tb.point_ok.assign(nr * nt, 1);

    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            const double rho = tb.rho_pts[i];
            const double t = tb.t_pts[j];
            const auto n = static_cast<std::size_t>(std::lround(rho * vol));

            auto params = gibbs::GibbsParameters::global(opts.dim, 0.1, 0.1 * dom.side, 0.0, t);
            gibbs::McmcOptions mo;
            mo.fixed_n = true;
            mo.n_init = n;
            mo.displacement = opts.displacement;
            gibbs::McmcChain chain(dom, pot, params, mo,
                                   Rng(opts.seed, i * nt + j + 1));
            chain.run(opts.burn_sweeps);

            std::vector<md::ParticleState> ens;
            std::vector<double> upot;
            for (int sample = 0; sample < opts.samples; ++sample) {
                chain.run(opts.sweep_stride);
                md::ParticleState st;
                st.dim = opts.dim;
                st.box = dom.side;
                st.pos = chain.positions();
                st.vel.assign(n, Vec{});
                auto inv = md::total_invariants(st, pot, dom);
                upot.push_back(inv.potential);
                ens.push_back(std::move(st));
            }
            auto vir = fields::virial_pressure(ens, t, rho, pot, dom);
            auto ue = batch_mean_stderr(upot, 8);
            const std::size_t k = i * nt + j;
            tb.p_vals[k] = vir.pressure.mean;
            tb.p_err[k] = vir.pressure.stderr_;
            // e = kinetic (exact by equipartition) + potential per particle
            tb.e_vals[k] = 0.5 * opts.dim * t + ue.mean / static_cast<double>(n);
            tb.e_err[k] = ue.stderr_ / static_cast<double>(n);
            if (chain.diagnostics().mixing_warning) tb.point_ok[k] = 0;
        }
    }
    tb.finalize();
    return tb;
}

} // namespace ghostflow::eos
