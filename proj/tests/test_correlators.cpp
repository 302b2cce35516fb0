#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ghostflow/appendix_coeffs.hpp"
#include "ghostflow/grid.hpp"
#include "ghostflow/nulltests.hpp"
#include "ghostflow/pipeline.hpp"
#include "test_util.hpp"

using namespace ghostflow;
using namespace ghostflow::corr;

namespace {

// synthetic ensemble whose totals are given per member
Ensemble synthetic_ensemble(const std::vector<std::vector<double>>& series, double frame_dt,
                            double volume, int dim = 2) {
    Ensemble ens;
    ens.dim = dim;
    ens.volume = volume;
    for (const auto& s : series) {
        MemberSeries m;
        m.frame_dt = frame_dt;
        for (double v : s) {
            fields::CurrentTotals t;
            t.dim = dim;
            t.volume = volume;
            t.wstar[0][1] = v;
            m.frames.push_back(t);
        }
        ens.members.push_back(std::move(m));
    }
    return ens;
}

CorrelationSeries synthetic_corr(const std::function<double(double)>& f, double dt,
                                 std::size_t n, double noise_floor = 1e-9) {
    CorrelationSeries c;
    c.frame_dt = dt;
    for (std::size_t lag = 0; lag < n; ++lag) {
        const double tau = static_cast<double>(lag) * dt;
        c.lag_time.push_back(tau);
        c.value.push_back(f(tau));
        c.count.push_back(1000);
        c.stderr_.push_back(noise_floor);
    }
    return c;
}

pipeline::EquilibriumRunConfig ideal_gas_run(std::uint64_t seed, long steps = 4000) {
    pipeline::EquilibriumRunConfig cfg;
    cfg.dim = 2;
    cfg.side = 12.0;
    cfg.n_particles = 48;
    cfg.temperature = 1.0;
    cfg.pot.kind = md::PotentialSpec::Kind::zero;
    cfg.dt = 5e-3;
    cfg.steps = steps;
    cfg.save_every = 10;
    cfg.members = 12;
    cfg.sampler_sweeps = 50;
    cfg.seed = seed;
    cfg.threads = 2;
    return cfg;
}

} // namespace

TEST_CASE("projector fixes its basis and is idempotent") {
    auto ens = pipeline::run_equilibrium_ensemble(ideal_gas_run(11, 800));
    auto basis = build_projector(ens);
    CHECK(basis.condition_number > 0);

    // P z^mu = z^mu: coefficients of a conserved field are a unit vector
    for (int mu = 0; mu < 4; ++mu) {
        auto c = basis.coefficients(ens, ex_z(mu));
        for (int nu = 0; nu < 4; ++nu)
            CHECK(std::fabs(c[static_cast<std::size_t>(nu)] - (mu == nu ? 1.0 : 0.0)) < 1e-10);
    }

    // P^2 = P on a random mixed observable
    auto obs = extract_series(ens, [](const fields::CurrentTotals& t) {
        return 0.7 * t.wstar[0][0] + 0.2 * t.z[1] - 1.3 * t.z[3] + 0.5;
    });
    auto once = basis.project_series(ens, obs);
    auto twice = basis.project_series(ens, once);
    double scale = 0.0;
    for (const auto& m : once)
        for (double v : m) scale = std::max(scale, std::fabs(v));
    for (std::size_t m = 0; m < once.size(); ++m)
        for (std::size_t t = 0; t < once[m].size(); ++t)
            CHECK(std::fabs(once[m][t] - twice[m][t]) <= 1e-10 * std::max(scale, 1.0));
}

TEST_CASE("projector matches a hand-built normal-equations oracle on a small case") {
    // 12 snapshots of 2 particles, d = 2
    md::TorusDomain dom;
    dom.dim = 2;
    dom.side = 6.0;
    dom.cell_cutoff = 1.0;
    md::PotentialSpec pot;
    Ensemble ens;
    ens.dim = 2;
    ens.volume = dom.volume();
    Rng rng(5);
    MemberSeries mem;
    mem.frame_dt = 1.0;
    for (int s = 0; s < 12; ++s) {
        auto st = testutil::random_state(2, 2, dom.side, 1.0, 100 + static_cast<std::uint64_t>(s));
        mem.frames.push_back(fields::current_totals(st, pot, dom));
    }
    ens.members.push_back(mem);
    auto basis = build_projector(ens, /*relax_count=*/true);

    // oracle: explicit least squares of W on the centered Z columns
    auto obs = extract_series(ens, ex_wstar(0, 0));
    auto coef = basis.coefficients_series(ens, obs);
    const std::size_t n = 12;
    SmallMat zc(n, 4);
    std::vector<double> wc(n);
    double zmean[4] = {0, 0, 0, 0}, wmean = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        for (int mu = 0; mu < 4; ++mu) zmean[mu] += ens.members[0].frames[s].z[mu];
        wmean += obs[0][s];
    }
    for (int mu = 0; mu < 4; ++mu) zmean[mu] /= n;
    wmean /= n;
    for (std::size_t s = 0; s < n; ++s) {
        for (int mu = 0; mu < 4; ++mu)
            zc(s, static_cast<std::size_t>(mu)) = ens.members[0].frames[s].z[mu] - zmean[mu];
        wc[s] = obs[0][s] - wmean;
    }
    auto fit = least_squares(zc, wc);
    for (int mu = 0; mu < 4; ++mu)
        CHECK(coef[static_cast<std::size_t>(mu)] ==
              doctest::Approx(fit[static_cast<std::size_t>(mu)]).epsilon(1e-12));
}

TEST_CASE("projector rejects a degenerate ensemble") {
    md::TorusDomain dom;
    dom.dim = 2;
    dom.side = 6.0;
    md::PotentialSpec pot;
    Ensemble ens;
    ens.dim = 2;
    ens.volume = dom.volume();
    MemberSeries mem;
    mem.frame_dt = 1.0;
    auto st = testutil::random_state(2, 4, dom.side, 1.0, 3);
    for (int s = 0; s < 12; ++s) mem.frames.push_back(fields::current_totals(st, pot, dom));
    ens.members.push_back(mem);
    CHECK_THROWS_AS(build_projector(ens, true), degenerate_ensemble_error);
}

TEST_CASE("slow-mode subtraction leaves orthogonal input unchanged and kills z itself") {
    auto ens = pipeline::run_equilibrium_ensemble(ideal_gas_run(21, 600));
    auto basis = build_projector(ens);

    // z0 itself becomes statistically zero (exactly zero in-sample up to
    // solver precision)
    auto killed = subtract_slow_modes(ens, ex_z(0), basis);
    double scale = 0.0;
    for (const auto& m : ens.members)
        for (const auto& f : m.frames) scale = std::max(scale, std::fabs(f.z[0]));
    for (const auto& m : killed)
        for (double v : m) CHECK(std::fabs(v) <= 1e-8 * scale);

    // residual projections vanish in-sample
    auto wbar = subtract_slow_modes(ens, ex_wstar(0, 1), basis);
    auto resid = basis.coefficients_series(ens, wbar);
    for (double c : resid) CHECK(std::fabs(c) < 1e-10);

    // an observable orthogonal to the basis is returned unchanged (centered)
    auto orth = centered(extract_series(ens, [](const fields::CurrentTotals& t) {
        return t.wstar[0][1]; // odd x odd component, orthogonal to all z
    }));
    auto sub = subtract_slow_modes(ens, ex_wstar(0, 1), basis);
    double worst = 0.0, norm = 0.0;
    for (std::size_t m = 0; m < sub.size(); ++m)
        for (std::size_t t = 0; t < sub[m].size(); ++t) {
            worst = std::max(worst, std::fabs(sub[m][t] - orth[m][t]));
            norm = std::max(norm, std::fabs(orth[m][t]));
        }
    CHECK(worst <= 2e-2 * norm); // coefficients are statistically zero, not exact
}

TEST_CASE("time correlation: constants, alternating series, counts") {
    // constant fields: C(tau) = c^2 * volume
    const double c = 1.7, vol = 9.0;
    std::vector<std::vector<double>> members(3, std::vector<double>(20, c * vol));
    auto ens = synthetic_ensemble(members, 0.5, vol);
    Series s = extract_series(ens, ex_wstar(0, 1));
    auto corr = time_correlation_series(ens, s, s, 3);
    for (std::size_t lag = 0; lag <= 3; ++lag)
        CHECK(corr.value[lag] == doctest::Approx(c * c * vol).epsilon(1e-12));
    CHECK(corr.count[0] == 60);
    CHECK(corr.count[3] == 51);

    // alternating +-1 scalar in a unit cell: C(1) = -1
    std::vector<double> alt(40);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
    auto ens2 = synthetic_ensemble({alt}, 1.0, 1.0);
    Series s2 = extract_series(ens2, ex_wstar(0, 1));
    auto corr2 = time_correlation_series(ens2, s2, s2, 2);
    CHECK(corr2.value[0] == doctest::Approx(1.0));
    CHECK(corr2.value[1] == doctest::Approx(-1.0));
    CHECK(corr2.value[2] == doctest::Approx(1.0));
}

TEST_CASE("time correlation: max_lag must leave enough origins") {
    std::vector<std::vector<double>> members(2, std::vector<double>(10, 1.0));
    auto ens = synthetic_ensemble(members, 1.0, 1.0);
    Series s = extract_series(ens, ex_wstar(0, 1));
    CHECK_THROWS_AS(time_correlation_series(ens, s, s, 10), config_error);
}

TEST_CASE("accumulator merge is a commutative monoid") {
    Rng rng(9);
    std::vector<std::vector<double>> a(6), b(6);
    for (int m = 0; m < 6; ++m)
        for (int t = 0; t < 50; ++t) {
            a[static_cast<std::size_t>(m)].push_back(rng.normal());
            b[static_cast<std::size_t>(m)].push_back(rng.normal());
        }
    CorrelationAccumulator whole(8);
    for (int m = 0; m < 6; ++m)
        whole.add_member(a[static_cast<std::size_t>(m)], b[static_cast<std::size_t>(m)]);
    CorrelationAccumulator part1(8), part2(8);
    for (int m = 0; m < 3; ++m)
        part1.add_member(a[static_cast<std::size_t>(m)], b[static_cast<std::size_t>(m)]);
    for (int m = 3; m < 6; ++m)
        part2.add_member(a[static_cast<std::size_t>(m)], b[static_cast<std::size_t>(m)]);
    part1.merge(part2);
    auto c1 = whole.finalize(1.0, 2.0, "w", 1, 0);
    auto c2 = part1.finalize(1.0, 2.0, "m", 1, 0);
    for (std::size_t lag = 0; lag <= 8; ++lag) CHECK(c1.value[lag] == c2.value[lag]);
}

TEST_CASE("toy trajectory: totals estimator equals the gridded cell-pair oracle") {
    md::TorusDomain dom;
    dom.dim = 2;
    dom.side = 6.0;
    dom.cell_cutoff = 1.0;
    md::PotentialSpec pot;
    auto st = testutil::lattice_state(2, 2, dom.side, 1.0, 31); // N = 4
    md::VerletIntegrator integ(st, pot, dom);

    fields::GridSpec spec;
    spec.dim = 2;
    spec.n = 3;
    spec.eps = 0.1;
    spec.micro_side = dom.side;

    Ensemble ens;
    ens.dim = 2;
    ens.volume = dom.volume();
    MemberSeries mem;
    mem.frame_dt = 0.05;
    std::vector<fields::CurrentGrid> grids;
    for (int f = 0; f < 24; ++f) {
        mem.frames.push_back(fields::current_totals(integ.state(), pot, dom));
        grids.push_back(fields::compute_currents(integ.state(), spec, pot, dom));
        integ.run(0.005, 10);
    }
    ens.members.push_back(mem);

    // estimator under test: totals path, uncentered legs
    Series sa = extract_series(ens, ex_wstar(0, 1));
    auto est = time_correlation_series(ens, sa, sa, 5);

    // literal double loop over origins and cell pairs
    const double cell_to_total = spec.cell_volume_macro() / spec.eps_pow_d();
    const std::size_t nf = 24;
    for (std::size_t lag = 0; lag <= 5; ++lag) {
        double acc = 0.0;
        long cnt = 0;
        for (std::size_t t0 = 0; t0 + lag < nf; ++t0) {
            double left = 0.0, right = 0.0;
            for (std::size_t cc = 0; cc < spec.n_cells(); ++cc) {
                left += grids[t0 + lag].wstar[1][cc] * cell_to_total;
                right += grids[t0].wstar[1][cc] * cell_to_total;
            }
            acc += left * right;
            ++cnt;
        }
        const double oracle = acc / (static_cast<double>(cnt) * dom.volume());
        CHECK(est.value[lag] == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("toy trajectory: three-current estimator equals a literal triple loop") {
    md::TorusDomain dom;
    dom.dim = 2;
    dom.side = 6.0;
    dom.cell_cutoff = 1.0;
    md::PotentialSpec pot;
    auto st = testutil::lattice_state(2, 2, dom.side, 1.1, 77);
    md::VerletIntegrator integ(st, pot, dom);

    Ensemble ens;
    ens.dim = 2;
    ens.volume = dom.volume();
    MemberSeries mem;
    mem.frame_dt = 0.05;
    for (int f = 0; f < 20; ++f) {
        mem.frames.push_back(fields::current_totals(integ.state(), pot, dom));
        integ.run(0.005, 10);
    }
    ens.members.push_back(mem);

    Series a = extract_series(ens, ex_z(1));
    Series b = extract_series(ens, ex_w_energy(0));
    Series w = centered(extract_series(ens, ex_wstar(0, 1)));
    auto est = three_current_correlation(ens, a, b, w, 4);

    double ab_mean = 0.0;
    for (std::size_t t = 0; t < 20; ++t) ab_mean += a[0][t] * b[0][t];
    ab_mean /= 20.0;
    for (std::size_t lag = 0; lag <= 4; ++lag) {
        double acc = 0.0;
        long cnt = 0;
        for (std::size_t t0 = 0; t0 + lag < 20; ++t0) {
            acc += (a[0][t0 + lag] * b[0][t0 + lag] - ab_mean) * w[0][t0];
            ++cnt;
        }
        CHECK(est.value[lag] ==
              doctest::Approx(acc / (static_cast<double>(cnt) * dom.volume())).epsilon(1e-12));
    }
}

TEST_CASE("green-kubo synthetic fixtures reproduce analytic integrals") {
    const double dt = 1e-3;
    const std::size_t n = 20000;
    PlateauRule rule;

    auto cexp = synthetic_corr([](double tau) { return std::exp(-tau); }, dt, n, 1e-6);
    auto eta = green_kubo_shear(cexp, 1.0, rule);
    CHECK(eta.converged);
    CHECK(eta.value == doctest::Approx(0.5).epsilon(1e-4));

    auto czeta = synthetic_corr([](double tau) { return 2.0 * std::exp(-2.0 * tau); }, dt, n, 1e-6);
    auto zeta = green_kubo_bulk(czeta, 1.0, 2, rule);
    CHECK(zeta.value == doctest::Approx(0.125).epsilon(1e-4));

    // two diagonal channels each exp(-tau), zero subtraction
    auto ck = synthetic_corr([](double tau) { return 2.0 * std::exp(-tau); }, dt, n, 1e-6);
    auto kappa = green_kubo_conductivity(ck, 1.0, 1.0, 1.0, 1.0, 2, false, rule);
    CHECK(kappa.value == doctest::Approx(0.5).epsilon(1e-4));

    // zero signal: value 0 within stderr
    auto zero = synthetic_corr([](double) { return 0.0; }, dt, 2000);
    auto z = green_kubo_shear(zero, 1.0, rule);
    CHECK(z.value == doctest::Approx(0.0).epsilon(1e-12));

    // tau-weighted integral: int tau exp(-tau) = 1
    auto first_moment = integrate_correlation(cexp, rule, /*weight_tau=*/true);
    CHECK(first_moment.value == doctest::Approx(1.0).epsilon(1e-3));

    // a correlation that never decays is flagged
    auto flat = synthetic_corr([](double) { return 1.0; }, dt, 2000);
    auto bad = integrate_correlation(flat, rule);
    CHECK(!bad.converged);
    CHECK(bad.flag == "non-converged");
}

TEST_CASE("isotropy decomposition recovers exact coefficients") {
    const int d = 2;
    std::vector<CorrelationSeries> channels;
    const double cv = 2.0, cpv = 3.0;
    for (int mu = 0; mu < d; ++mu)
        for (int l = 0; l < d; ++l)
            for (int b = 0; b < d; ++b)
                for (int k = 0; k < d; ++k) {
                    const double t1 = ((k == l && b == mu) ? 1.0 : 0.0) +
                                      ((k == mu && b == l) ? 1.0 : 0.0);
                    const double t2 = (b == k && l == mu) ? 1.0 : 0.0;
                    channels.push_back(synthetic_corr(
                        [=](double tau) { return (cv * t1 + cpv * t2) * std::exp(-tau); }, 0.01,
                        500));
                }
    auto iso = isotropy_decompose(channels, d);
    CHECK(iso.c.value[0] == doctest::Approx(cv).epsilon(1e-10));
    CHECK(iso.c_prime.value[0] == doctest::Approx(cpv).epsilon(1e-10));
    CHECK(!iso.anisotropy_warning);

    // the pure shear channel (1,2;1,2) is carried by c alone: T2 vanishes
    // there, so its value equals c(tau) for any c'
    const std::size_t shear_idx = 0 * 8 + 1 * 4 + 0 * 2 + 1;
    CHECK(channels[shear_idx].value[0] == doctest::Approx(cv).epsilon(1e-12));
    CHECK(iso.c.value[0] == doctest::Approx(channels[shear_idx].value[0]).epsilon(1e-10));
}

TEST_CASE("ideal gas: odd-velocity-power channels vanish and nulls pass") {
    auto ens = pipeline::run_equilibrium_ensemble(ideal_gas_run(33, 3000));
    auto basis = build_projector(ens);

    // odd total velocity power: <z^gamma(tau) wbar^{12}(0)> (power 3) and
    // <wE^gamma(tau) wbar^{12}(0)> (power 5)
    auto wbar = subtract_slow_modes(ens, ex_wstar(0, 1), basis);
    for (int g = 0; g < 2; ++g) {
        auto zg = centered(extract_series(ens, ex_z(1 + g)));
        auto c = time_correlation_series(ens, zg, wbar, 10);
        for (std::size_t lag = 0; lag <= 10; ++lag)
            CHECK(std::fabs(c.value[lag]) <= 3.5 * std::max(c.stderr_[lag], 1e-14));
        auto we = centered(extract_series(ens, ex_w_energy(g)));
        auto c2 = time_correlation_series(ens, we, wbar, 10);
        for (std::size_t lag = 0; lag <= 10; ++lag)
            CHECK(std::fabs(c2.value[lag]) <= 3.5 * std::max(c2.stderr_[lag], 1e-14));
    }

    // three-current with odd power: <z^1 z^2 z^1-leg>
    auto z1 = extract_series(ens, ex_z(1));
    auto z2 = extract_series(ens, ex_z(2));
    auto z1c = centered(z1);
    auto c3 = three_current_correlation(ens, z1, z2, z1c, 8);
    for (std::size_t lag = 0; lag <= 8; ++lag)
        CHECK(std::fabs(c3.value[lag]) <= 3.5 * std::max(c3.stderr_[lag], 1e-14));

    // Galilean report passes, and an injected bias is detected
    auto rep = galilean_null_test(ens, basis, 1.0, 40);
    CHECK(rep.all_pass);
    for (const auto& row : rep.rows)
        if (row.name.rfind("boost", 0) == 0) CHECK(std::fabs(row.value + 0.1) > 3.0 * row.stderr_);

    // static sum rules at the ideal point with the measured density
    const double rho = basis.z_mean[0] / ens.volume;
    auto comp = compatibility_residuals(ens, basis, rho, 1.0, 1.0, rho * 1.0);
    int fails = 0;
    for (const auto& row : comp.rows) fails += row.pass ? 0 : 1;
    CHECK(fails <= 1); // allow a single 3-sigma fluctuation across the battery
}

TEST_CASE("static Y coefficients vanish for the ideal gas and match a tiny-system oracle") {
    auto ens = pipeline::run_equilibrium_ensemble(ideal_gas_run(55, 500));
    eos::LambdaDerivatives ld;
    ld.l0_prime = -2.0;
    ld.le_prime = 1.0;
    ld.l0_double_prime = 2.0;
    ld.le_double_prime = -2.0;
    auto ys = static_y_coefficients(ens, ld);
    CHECK(ys.y1 == 0.0);
    CHECK(ys.y2 == 0.0);
    CHECK(ys.w1_bar == 0.0);
    CHECK(ys.w2_bar == 0.0);

    // tiny interacting system: estimator equals an enumerated oracle
    md::TorusDomain dom;
    dom.dim = 2;
    dom.side = 6.0;
    dom.cell_cutoff = 1.0;
    md::PotentialSpec pot;
    Ensemble tiny;
    tiny.dim = 2;
    tiny.volume = dom.volume();
    Rng vr(3);
    MemberSeries mem;
    mem.frame_dt = 1.0;
    for (int f = 0; f < 7; ++f) {
        md::ParticleState st;
        st.dim = 2;
        st.box = dom.side;
        for (int i = 0; i < 3; ++i) {
            Vec p, v;
            p[0] = 1.0 + 0.7 * i + 0.1 * f;
            p[1] = 2.0 + 0.4 * i * i;
            v[0] = vr.normal();
            v[1] = vr.normal();
            st.pos.push_back(dom.wrap(p));
            st.vel.push_back(v);
        }
        mem.frames.push_back(fields::current_totals(st, pot, dom));
    }
    tiny.members.push_back(mem);

    auto got = static_y_coefficients(tiny, ld, 0);

    // oracle: enumerate the frames directly
    const auto& fr = tiny.members[0].frames;
    const double nf = static_cast<double>(fr.size());
    double mz0 = 0, mze = 0, mphi01 = 0, mphi10 = 0;
    for (const auto& f : fr) {
        mz0 += f.z[0];
        mze += f.z[3];
        mphi01 += f.phi_ab[0][1];
        mphi10 += f.phi_ab[1][0];
    }
    mz0 /= nf;
    mze /= nf;
    mphi01 /= nf;
    mphi10 /= nf;
    double y2 = 0.0;
    for (const auto& f : fr) {
        y2 += ld.l0_prime * (f.z[0] - mz0) * (f.phi_ab[0][1] - mphi01) +
              ld.le_prime * (f.z[3] - mze) * (f.phi_ab[0][1] - mphi01);
        y2 += ld.l0_prime * (f.z[0] - mz0) * (f.phi_ab[1][0] - mphi10) +
              ld.le_prime * (f.z[3] - mze) * (f.phi_ab[1][0] - mphi10);
    }
    y2 /= nf * tiny.volume * 2.0; // two off-diagonal channels
    y2 /= 6.0;
    CHECK(got.y2 == doctest::Approx(y2).epsilon(1e-12));
}

TEST_CASE("double-time channels: Gaussian system gives statistically null tensors") {
    auto ens = pipeline::run_equilibrium_ensemble(ideal_gas_run(66, 2000));
    auto basis = build_projector(ens);
    PlateauRule rule;
    auto dt = double_time_coefficients(ens, basis, 30, rule);
    // with V = 0 the composite interaction currents vanish identically
    CHECK(dt.d1.value == dt.d1.value); // finite
    CHECK(dt.g1.value == 0.0);
    CHECK(dt.g2.value == 0.0);
    CHECK(dt.f1.value == 0.0);
    // a-, h-channels: no interaction part in 2d ideal gas makes these noisy
    // but bounded; just require finite values and propagated flags
    CHECK(std::isfinite(dt.a1.value));
    CHECK(std::isfinite(dt.h2.value));
}

TEST_CASE("assembly combines channels with the closing formulas") {
    StaticYResult ys;
    ys.y1 = 0.1;
    ys.y2 = 0.2;
    ys.w1_bar = 0.3;
    ys.w2_bar = 0.4;
    DoubleTimeCoefficients dt;
    auto set = [](corr::GkResult& r, double v) {
        r.value = v;
        r.converged = true;
    };
    set(dt.a1, 1.0);
    set(dt.a2, 2.0);
    set(dt.b1, 3.0);
    set(dt.b2, 4.0);
    set(dt.c1, 5.0);
    set(dt.c2, 6.0);
    set(dt.d1, 7.0);
    set(dt.d2, 8.0);
    set(dt.h1, 9.0);
    set(dt.h2, 10.0);
    set(dt.g1, 11.0);
    set(dt.g2, 12.0);
    set(dt.f1, 13.0);
    dt.all_converged = true;
    eos::LambdaDerivatives ld;
    ld.l0_prime = -1.5;
    ld.l0_double_prime = 0.5;
    ld.le_prime = 1.0;
    ld.le_double_prime = -2.0;
    const double temperature = 1.2;
    auto asb = assemble_thermal_stress(ys, dt, ld, temperature);
    const double z1_expect = 4.0 * 2.0 * (-1.5) * 1.0 + 2.0 * 4.0 * 2.25 + 2.0 * 6.0 * 1.0 +
                             (-2.0) * (10.0 + 16.0 + 12.0);
    CHECK(asb.z1 == doctest::Approx(z1_expect).epsilon(1e-12));
    const double z2_expect = 2.0 * 1.0 * 8.0 + 2.0 * (-1.5) * temperature * 10.0 + 1.0 * 12.0;
    CHECK(asb.z2 == doctest::Approx(z2_expect).epsilon(1e-12));
    const double phi1_expect = 0.5 * 9.0 + (-2.0) * 7.0 + 1.0 * 1.0 * (-1.5) + 3.0 * 2.25 +
                               5.0 * 1.0 + (-2.0) * (11.0 + 13.0);
    CHECK(asb.phi1 == doctest::Approx(phi1_expect).epsilon(1e-12));
    const double phi2_expect = (-1.5) * 9.0 + 1.0 * 7.0 + 1.0 * (11.0 + 13.0);
    CHECK(asb.phi2 == doctest::Approx(phi2_expect).epsilon(1e-12));
    CHECK(asb.k1 == doctest::Approx(0.1 + z1_expect));
    CHECK(asb.k2 == doctest::Approx(0.2 + z2_expect));
    CHECK(asb.omega1 == doctest::Approx(0.3 + phi1_expect));
    CHECK(asb.omega2 == doctest::Approx(0.4 + phi2_expect));
    CHECK(asb.reliable);
}
