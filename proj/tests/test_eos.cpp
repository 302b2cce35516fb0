#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ghostflow/eos.hpp"

using namespace ghostflow;
using namespace ghostflow::eos;

TEST_CASE("ideal-gas table reproduces the analytic state equation") {
    auto tb = StateEquationTable::ideal(2, {0.3, 0.5, 0.7, 0.9, 1.1}, {0.8, 1.0, 1.2, 1.4});
    IdealGasEos ref(2);
    // P = rho T and e = T are bilinear/linear, splines are exact there
    for (double rho : {0.35, 0.6, 1.05})
        for (double t : {0.85, 1.11, 1.35}) {
            CHECK(tb.pressure(rho, t) == doctest::Approx(rho * t).epsilon(1e-12));
            CHECK(tb.energy(rho, t) == doctest::Approx(t).epsilon(1e-12));
            CHECK(tb.dP_drho(rho, t) == doctest::Approx(t).epsilon(1e-10));
            CHECK(tb.dP_dT(rho, t) == doctest::Approx(rho).epsilon(1e-10));
            // entropy from integration vs analytic, same reference point
            const double s_ref = ref.entropy(rho, t) - ref.entropy(tb.rho_pts[0], tb.t_pts[0]);
            CHECK(tb.entropy(rho, t) == doctest::Approx(s_ref).epsilon(0.02));
        }
    CHECK(tb.complete());
}

TEST_CASE("entropy partial relations hold to interpolation tolerance") {
    auto tb = StateEquationTable::ideal(2, {0.4, 0.55, 0.7, 0.85, 1.0}, {0.9, 1.05, 1.2, 1.35});
    for (double rho : {0.5, 0.75, 0.95})
        for (double t : {0.95, 1.1, 1.3}) {
            // ds/de|rho = (ds/dT)/(de/dT) = 1/T
            const double lhs = tb.ds_dT(rho, t) / tb.de_dT(rho, t);
            CHECK(lhs == doctest::Approx(1.0 / t).epsilon(0.02));
            // ds/drho|T = de/drho / T - P/(T rho^2)
            const double rel = tb.ds_drho(rho, t) -
                               (tb.de_drho(rho, t) / t - tb.pressure(rho, t) / (t * rho * rho));
            CHECK(std::fabs(rel) < 0.02 * std::fabs(tb.ds_drho(rho, t)) + 1e-6);
        }
}

TEST_CASE("lambda0 derivative along constant P matches the thermodynamic identity") {
    IdealGasEos eos(2);
    // analytic: (lambda0)' |_P = -(rho e + P)/(rho T^2) = -(d+2)/(2T)
    for (double t : {0.9, 1.0, 1.3}) {
        const double rho = 0.8;
        auto ld = lambda_derivatives_const_p(eos, rho, t, 1e-4);
        CHECK(ld.l0_prime == doctest::Approx(-2.0 / t).epsilon(1e-5));
        CHECK(ld.le_prime == doctest::Approx(1.0 / (t * t)));
        // identity residual
        const double res =
            ld.l0_prime * rho + (rho * eos.energy(rho, t) + eos.pressure(rho, t)) / (t * t);
        CHECK(std::fabs(res) < 1e-5);
    }
}

TEST_CASE("rho_of_PT inverts the constraint") {
    IdealGasEos eos(2);
    CHECK(eos.rho_of_PT(2.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eos.rho_of_PT(2.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    auto tb = StateEquationTable::ideal(2, {0.3, 0.6, 0.9, 1.2, 1.5, 1.8, 2.1}, {0.8, 1.0, 1.2, 1.4});
    for (double t : {0.9, 1.1, 1.3}) {
        const double rho = tb.rho_of_PT(1.0, t, 1.0, 1e-11);
        CHECK(std::fabs(tb.pressure(rho, t) - 1.0) < 1e-10);
    }
}

TEST_CASE("measured table: path independence, monotonicity, csv round trip") {
    md::PotentialSpec pot; // default poly4, a = 1, rc = 1
    TabulateOptions opts;
    opts.dim = 2;
    opts.box_side = 10.0;
    opts.burn_sweeps = 150;
    opts.samples = 30;
    opts.sweep_stride = 8;
    opts.seed = 71;
    auto tb = tabulate_state_equation({0.4, 0.5, 0.6}, {0.9, 1.1, 1.3}, pot, opts);

    CHECK(tb.complete());
    // two-path entropy agreement within twice the propagated error
    CHECK(tb.path_discrepancy <= 2.0 * tb.path_error_estimate + 1e-12);

    // e increasing in T at fixed rho across the measured grid
    const std::size_t nt = tb.t_pts.size();
    for (std::size_t i = 0; i < tb.rho_pts.size(); ++i)
        for (std::size_t j = 0; j + 1 < nt; ++j)
            CHECK(tb.e_vals[i * nt + j + 1] > tb.e_vals[i * nt + j]);

    // interacting gas at moderate density: P above the ideal value
    CHECK(tb.p_vals[0] > tb.rho_pts[0] * tb.t_pts[0]);

    tb.write_csv("eos_test.csv");
    auto rt = StateEquationTable::read_csv("eos_test.csv");
    REQUIRE(rt.rho_pts.size() == tb.rho_pts.size());
    REQUIRE(rt.t_pts.size() == tb.t_pts.size());
    for (std::size_t k = 0; k < tb.p_vals.size(); ++k) {
        CHECK(rt.p_vals[k] == doctest::Approx(tb.p_vals[k]).epsilon(1e-14));
        CHECK(rt.e_vals[k] == doctest::Approx(tb.e_vals[k]).epsilon(1e-14));
        CHECK(rt.s_vals[k] == doctest::Approx(tb.s_vals[k]).epsilon(1e-12));
    }
    std::filesystem::remove("eos_test.csv");
}

TEST_CASE("spline 2d reproduces a smooth function and its partials") {
    std::vector<double> xs, ys;
    for (int i = 0; i < 9; ++i) xs.push_back(0.5 + 0.1 * i);
    for (int j = 0; j < 9; ++j) ys.push_back(1.0 + 0.1 * j);
    std::vector<double> vals;
    for (double x : xs)
        for (double y : ys) vals.push_back(std::sin(x) * std::exp(0.3 * y));
    Spline2D sp(xs, ys, vals);
    for (double x : {0.62, 0.9, 1.17})
        for (double y : {1.12, 1.5, 1.73}) {
            const double f = std::sin(x) * std::exp(0.3 * y);
            CHECK(sp.eval(x, y) == doctest::Approx(f).epsilon(1e-4));
            CHECK(sp.eval(x, y, 1, 0) ==
                  doctest::Approx(std::cos(x) * std::exp(0.3 * y)).epsilon(5e-3));
            CHECK(sp.eval(x, y, 0, 1) == doctest::Approx(0.3 * f).epsilon(5e-3));
        }
}
