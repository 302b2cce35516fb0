#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ghostflow/forces.hpp"
#include "ghostflow/verlet.hpp"
#include "test_util.hpp"

using namespace ghostflow;
using namespace ghostflow::md;

namespace {

TorusDomain make_domain(int dim, double side, double rc = 1.0) {
    TorusDomain d;
    d.dim = dim;
    d.side = side;
    d.cell_cutoff = rc;
    return d;
}

} // namespace

TEST_CASE("minimum image wraps around the torus") {
    auto dom = make_domain(2, 10.0);
    Vec p, q;
    p[0] = 9.5;
    q[0] = 0.5;
    Vec d = minimum_image(p, q, dom);
    CHECK(d[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(0.0));

    Vec same;
    same[0] = 3.2;
    same[1] = 7.7;
    Vec z = minimum_image(same, same, dom);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
}

TEST_CASE("minimum image is the shortest displacement over the 3x3 image grid") {
    auto dom = make_domain(2, 7.0);
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        Vec p, q;
        for (int k = 0; k < 2; ++k) {
            p[k] = rng.uniform(0.0, dom.side);
            q[k] = rng.uniform(0.0, dom.side);
        }
        Vec d = minimum_image(p, q, dom);
        for (int k = 0; k < 2; ++k) {
            CHECK(d[k] >= -dom.side / 2);
            CHECK(d[k] < dom.side / 2);
            // exhaustive over images: no shorter displacement exists
            double best = 1e300;
            for (int im = -1; im <= 1; ++im)
                best = std::min(best, std::fabs(p[k] - q[k] + im * dom.side));
            CHECK(std::fabs(d[k]) == doctest::Approx(best).epsilon(1e-12));
        }
    }
}

TEST_CASE("forces: single particle and out-of-range pair give zero") {
    auto dom = make_domain(2, 10.0);
    PotentialSpec pot; // poly4, a=1, rc=1

    ParticleState one;
    one.dim = 2;
    one.box = 10.0;
    one.pos.push_back(Vec{});
    one.vel.push_back(Vec{});
    auto f1 = compute_forces(one, pot, dom);
    CHECK(f1.potential_energy == 0.0);
    CHECK(f1.force[0][0] == 0.0);

    ParticleState two = one;
    Vec p2;
    p2[0] = 2.5; // r = 2.5 >= rc
    two.pos.push_back(p2);
    two.vel.push_back(Vec{});
    auto f2 = compute_forces(two, pot, dom);
    CHECK(f2.potential_energy == 0.0);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) CHECK(f2.force[static_cast<std::size_t>(i)][k] == 0.0);
}

TEST_CASE("forces: overlapping particles raise a degenerate-configuration error") {
    auto dom = make_domain(2, 10.0);
    PotentialSpec pot;
    ParticleState s;
    s.dim = 2;
    s.box = 10.0;
    Vec p;
    p[0] = 1.0;
    s.pos = {p, p};
    s.vel = {Vec{}, Vec{}};
    CHECK_THROWS_AS(compute_forces(s, pot, dom), degenerate_configuration_error);
}

TEST_CASE("forces: cell list equals all-pairs oracle on random configurations") {
    PotentialSpec pot;
    for (int dim : {2, 3}) {
        auto dom = make_domain(dim, dim == 2 ? 9.0 : 5.0);
        for (int trial = 0; trial < 25; ++trial) {
            auto s = testutil::random_state(dim, 32, dom.side, 1.0,
                                            1000 + static_cast<std::uint64_t>(100 * dim + trial));
            auto a = compute_forces(s, pot, dom, ForceMode::cell_list);
            auto b = compute_forces(s, pot, dom, ForceMode::all_pairs);
            double scale = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) scale += norm(b.force[i], dim);
            scale = std::max(scale, 1e-30);
            for (std::size_t i = 0; i < s.size(); ++i)
                for (int k = 0; k < dim; ++k)
                    CHECK(std::fabs(a.force[i][k] - b.force[i][k]) <= 1e-12 * scale);
            CHECK(a.potential_energy ==
                  doctest::Approx(b.potential_energy).epsilon(1e-12));
        }
    }
}

TEST_CASE("forces: Newton third law and zero net force") {
    auto dom = make_domain(2, 9.0);
    PotentialSpec pot;
    auto s = testutil::random_state(2, 64, dom.side, 1.0, 7);
    // pairwise antisymmetry is structural (one evaluation per pair); check
    // the net force contract
    auto f = compute_forces(s, pot, dom);
    double net[2] = {0.0, 0.0};
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (int k = 0; k < 2; ++k) net[k] += f.force[i][k];
        total += norm(f.force[i], 2);
    }
    for (int k = 0; k < 2; ++k) CHECK(std::fabs(net[k]) <= 1e-10 * std::max(total, 1e-300));
}

TEST_CASE("forces: translation invariance") {
    auto dom = make_domain(2, 9.0);
    PotentialSpec pot;
    auto s = testutil::random_state(2, 48, dom.side, 1.0, 11);
    auto f0 = compute_forces(s, pot, dom, ForceMode::all_pairs);
    ParticleState shifted = s;
    Vec delta;
    delta[0] = 3.21;
    delta[1] = -1.77;
    for (auto& p : shifted.pos) p = dom.wrap(p + delta);
    auto f1 = compute_forces(shifted, pot, dom, ForceMode::all_pairs);
    double scale = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) scale += norm(f0.force[i], 2);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (int k = 0; k < 2; ++k)
            CHECK(std::fabs(f0.force[i][k] - f1.force[i][k]) <= 1e-12 * std::max(scale, 1.0));
    CHECK(f0.potential_energy == doctest::Approx(f1.potential_energy).epsilon(1e-12));
}

TEST_CASE("forces: worker count does not change results beyond rounding") {
    auto dom = make_domain(2, 9.0);
    PotentialSpec pot;
    auto s = testutil::random_state(2, 64, dom.side, 1.0, 23);
    auto f1 = compute_forces(s, pot, dom, ForceMode::cell_list, 1);
    auto f4 = compute_forces(s, pot, dom, ForceMode::cell_list, 4);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (int k = 0; k < 2; ++k)
            CHECK(f1.force[i][k] == doctest::Approx(f4.force[i][k]).epsilon(1e-13));
}

TEST_CASE("verlet: free streaming is exact") {
    auto dom = make_domain(2, 10.0);
    PotentialSpec pot;
    pot.kind = PotentialSpec::Kind::zero;
    auto s = testutil::random_state(2, 16, dom.side, 1.0, 3);
    auto expect = s;
    const double dt = 0.25;
    auto out = verlet_step(s, dt, pot, dom);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (int k = 0; k < 2; ++k) {
            const double x = dom.wrap(expect.pos[i][k] + dt * expect.vel[i][k]);
            CHECK(out.pos[i][k] == doctest::Approx(x).epsilon(1e-15));
            CHECK(out.vel[i][k] == expect.vel[i][k]);
        }
    CHECK(out.time == doctest::Approx(dt));
}

TEST_CASE("verlet: time reversal returns to the initial positions") {
    auto dom = make_domain(2, 8.0);
    PotentialSpec pot;
    auto s0 = testutil::lattice_state(2, 6, dom.side, 0.5, 17);
    VerletIntegrator fwd(s0, pot, dom);
    const double dt = 1e-3;
    const int n = 500;
    fwd.run(dt, n);
    ParticleState rev = fwd.state();
    for (auto& v : rev.vel) v *= -1.0;
    VerletIntegrator bwd(rev, pot, dom);
    bwd.run(dt, n);
    for (std::size_t i = 0; i < s0.size(); ++i)
        for (int k = 0; k < 2; ++k) {
            double diff = bwd.state().pos[i][k] - s0.pos[i][k];
            diff -= dom.side * std::floor(diff / dom.side + 0.5);
            CHECK(std::fabs(diff) < 1e-10);
        }
}

TEST_CASE("verlet: NaN input is reported with the step index") {
    auto dom = make_domain(2, 8.0);
    PotentialSpec pot;
    pot.kind = PotentialSpec::Kind::zero;
    ParticleState s;
    s.dim = 2;
    s.box = 8.0;
    Vec p;
    p[0] = 1.0;
    Vec v;
    v[0] = std::numeric_limits<double>::quiet_NaN();
    s.pos = {p};
    s.vel = {v};
    VerletIntegrator integ(s, pot, dom);
    CHECK_THROWS_AS(integ.step(1e-3), propagation_error);
}

TEST_CASE("invariants: momentum and energy bookkeeping") {
    auto dom = make_domain(2, 10.0);
    PotentialSpec zero;
    zero.kind = PotentialSpec::Kind::zero;

    ParticleState s;
    s.dim = 2;
    s.box = 10.0;
    Vec p1, p2, v1, v2;
    p1[0] = 2.0;
    p2[0] = 7.0;
    v1[0] = 1.0;
    v2[0] = -1.0;
    s.pos = {p1, p2};
    s.vel = {v1, v2};
    auto inv = total_invariants(s, zero, dom);
    CHECK(inv.momentum[0] == 0.0);
    CHECK(inv.momentum[1] == 0.0);
    CHECK(inv.energy == doctest::Approx(1.0)); // 0.5*1 + 0.5*1
}

TEST_CASE("invariants: momentum conserved along a trajectory") {
    auto dom = make_domain(2, 8.0);
    PotentialSpec pot;
    auto s0 = testutil::lattice_state(2, 8, dom.side, 1.0, 5);
    auto inv0 = total_invariants(s0, pot, dom);
    VerletIntegrator integ(s0, pot, dom);
    integ.run(2e-3, 1000);
    auto inv1 = total_invariants(integ.state(), pot, dom);
    for (int k = 0; k < 2; ++k)
        CHECK(std::fabs(inv1.momentum[k] - inv0.momentum[k]) < 1e-12);
}

TEST_CASE("verlet: no secular energy drift at moderate dt") {
    auto dom = make_domain(2, 8.0);
    PotentialSpec pot;
    auto s0 = testutil::lattice_state(2, 8, dom.side, 1.0, 29);
    auto inv0 = total_invariants(s0, pot, dom);
    VerletIntegrator integ(s0, pot, dom);
    const double dt = 1e-3; // ~1e-3 * (rc / v_thermal), rc = v_th = 1
    double max_rel = 0.0;
    for (int chunk = 0; chunk < 10; ++chunk) {
        integ.run(dt, 200);
        auto inv = total_invariants(integ.state(), pot, dom);
        max_rel = std::max(max_rel, std::fabs(inv.energy - inv0.energy) /
                                        std::fabs(inv0.energy));
    }
    CHECK(max_rel < 1e-6);
}

TEST_CASE("checkpoint round trip is bit exact") {
    auto s = testutil::random_state(3, 9, 6.0, 1.3, 99);
    s.time = 4.25;
    const std::string path = "test_ckpt.bin";
    write_checkpoint(path, s);
    auto r = read_checkpoint(path);
    CHECK(r.dim == s.dim);
    CHECK(r.box == s.box);
    CHECK(r.time == s.time);
    REQUIRE(r.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        for (int k = 0; k < 3; ++k) {
            CHECK(r.pos[i][k] == s.pos[i][k]);
            CHECK(r.vel[i][k] == s.vel[i][k]);
        }
    std::filesystem::remove(path);
}
