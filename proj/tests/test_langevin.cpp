#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "motsim/langevin.hpp"

using namespace motsim;
using namespace motsim::constants;
using doctest::Approx;

namespace {

const AtomSpecies kTm = thulium();

ForceSample free_particle(const Vec3&, const Vec3&) { return {}; }

}  // namespace

TEST_CASE("initial ensemble statistics") {
    const EnsembleState state = init_ensemble(10000, 240e-6, 80e-6, kTm, 123);
    const CloudStats stats = cloud_stats(state, kTm);
    CHECK(stats.count == 10000);
    CHECK(stats.temperature == Approx(240e-6).epsilon(0.03));
    for (int j = 0; j < 3; ++j) {
        CHECK(stats.temperature_axis[j] == Approx(240e-6).epsilon(0.05));
        CHECK(stats.radius_1e[j] == Approx(80e-6).epsilon(0.05));
        CHECK(stats.center[j] == Approx(0.0).scale(80e-6).epsilon(0.03));
    }
}

TEST_CASE("initialization is deterministic in the seed") {
    const EnsembleState a = init_ensemble(64, 100e-6, 50e-6, kTm, 7);
    const EnsembleState b = init_ensemble(64, 100e-6, 50e-6, kTm, 7);
    const EnsembleState c = init_ensemble(64, 100e-6, 50e-6, kTm, 8);
    CHECK(a.positions == b.positions);
    CHECK(a.velocities == b.velocities);
    CHECK(a.positions != c.positions);
}

TEST_CASE("zero-temperature ensemble has zero velocities") {
    const EnsembleState state = init_ensemble(16, 0.0, 50e-6, kTm, 1);
    for (const Vec3& v : state.velocities)
        for (int j = 0; j < 3; ++j) CHECK(v[j] == 0.0);
}

TEST_CASE("init input validation") {
    CHECK_THROWS_AS(init_ensemble(0, 1e-6, 1e-6, kTm, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_ensemble(4, -1e-6, 1e-6, kTm, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_ensemble(4, 1e-6, 0.0, kTm, 1), std::invalid_argument);
    const EnsembleState one = init_ensemble(1, 1e-6, 1e-6, kTm, 1);
    CHECK_THROWS_AS(cloud_stats(one, kTm), std::invalid_argument);
}

TEST_CASE("ballistic expansion: closed form") {
    EnsembleState state;
    state.positions = {{1e-3, 0, 2e-3}};
    state.velocities = {{0.5, -0.25, 0.1}};
    SUBCASE("free flight without gravity") {
        ballistic_expand(state, 4e-3, false);
        CHECK(state.positions[0][0] == Approx(1e-3 + 0.5 * 4e-3).epsilon(1e-14));
        CHECK(state.positions[0][1] == Approx(-0.25 * 4e-3).epsilon(1e-14));
        CHECK(state.positions[0][2] == Approx(2e-3 + 0.1 * 4e-3).epsilon(1e-14));
        CHECK(state.velocities[0][0] == 0.5);
        CHECK(state.velocities[0][2] == 0.1);
    }
    SUBCASE("gravity adds -g t^2/2 to z") {
        ballistic_expand(state, 4e-3, true);
        CHECK(state.positions[0][2] ==
              Approx(2e-3 + 0.1 * 4e-3 - 0.5 * g_earth * 16e-6).epsilon(1e-12));
        CHECK(state.velocities[0][2] == Approx(0.1 - g_earth * 4e-3).epsilon(1e-12));
        // Horizontal velocities are untouched.
        CHECK(state.velocities[0][0] == 0.5);
        CHECK(state.velocities[0][1] == -0.25);
    }
    CHECK_THROWS_AS(ballistic_expand(state, -1e-3), std::invalid_argument);
}

TEST_CASE("expansion of a 25 uK, 80 um cloud reaches 405 um at 8 ms") {
    EnsembleState state = init_ensemble(10000, 25e-6, 80e-6, kTm, 99);
    ballistic_expand(state, 8e-3, true);
    const CloudStats stats = cloud_stats(state, kTm);
    const double expected = std::sqrt(80e-6 * 80e-6 +
                                      2.0 * k_boltzmann * 25e-6 / kTm.mass * 64e-6);
    CHECK(expected == Approx(405e-6).epsilon(2e-3));  // frozen closed form
    for (int j = 0; j < 3; ++j)
        CHECK(stats.radius_1e[j] == Approx(expected).epsilon(0.03));
    // Gravity displaces the center without changing the radius.
    CHECK(stats.center[2] == Approx(-0.5 * g_earth * 64e-6).epsilon(0.05));
}

TEST_CASE("pure diffusion: velocity variance grows as 2 D t / m^2") {
    const double d = 1e-45;  // (kg m/s)^2 / s
    auto force = [d](const Vec3&, const Vec3&) {
        ForceSample f;
        f.diffusion = {d, d, d};
        return f;
    };
    EnsembleState state = init_ensemble(10000, 0.0, 1e-6, kTm, 5);
    const double dt = 1e-5;
    for (int i = 0; i < 50; ++i) step(state, dt, force, kTm, false);
    const double t = 50 * dt;
    double var = 0.0;
    for (const Vec3& v : state.velocities)
        var += dot(v, v);
    var /= 3.0 * state.size();
    CHECK(var == Approx(2.0 * d * t / (kTm.mass * kTm.mass)).epsilon(0.05));
}

TEST_CASE("pure drag: exponential velocity decay") {
    const double alpha = 1e-20;  // kg/s
    auto force = [alpha](const Vec3&, const Vec3& v) {
        ForceSample f;
        f.force = -alpha * v;
        return f;
    };
    EnsembleState state;
    state.positions = {{0, 0, 0}};
    state.velocities = {{1.0, 0, 0}};
    const double dt = 1e-7;  // alpha dt / m ~ 3.6e-3
    const int steps = 20000;
    for (int i = 0; i < steps; ++i) step(state, dt, force, kTm, false);
    const double expected = std::exp(-alpha * steps * dt / kTm.mass);
    CHECK(state.velocities[0][0] == Approx(expected).epsilon(0.01));
}

TEST_CASE("fluctuation-dissipation: kB T = D / alpha within 5%") {
    const double alpha = 2.805e-22;            // m / alpha = 1 ms
    const double target = 100e-6;              // K
    const double d = alpha * k_boltzmann * target;
    auto force = [alpha, d](const Vec3&, const Vec3& v) {
        ForceSample f;
        f.force = -alpha * v;
        f.diffusion = {d, d, d};
        return f;
    };
    EnsembleState state = init_ensemble(10000, target, 1e-6, kTm, 11);
    const double dt = 2e-5;  // alpha dt / m = 0.02
    for (int i = 0; i < 300; ++i) step(state, dt, force, kTm, false);
    const CloudStats stats = cloud_stats(state, kTm);
    CHECK(stats.temperature == Approx(target).epsilon(0.05));
}

TEST_CASE("step noise is deterministic and independent of atom order") {
    const double d = 1e-45;
    auto force = [d](const Vec3&, const Vec3&) {
        ForceSample f;
        f.diffusion = {d, d, d};
        return f;
    };
    EnsembleState a = init_ensemble(8, 10e-6, 20e-6, kTm, 3);
    EnsembleState b = a;
    for (int i = 0; i < 10; ++i) {
        step(a, 1e-6, force, kTm, true);
        step(b, 1e-6, force, kTm, true);
    }
    CHECK(a.positions == b.positions);
    CHECK(a.velocities == b.velocities);
    CHECK(a.step_count == 10);
    CHECK(a.time == Approx(10e-6));
}

TEST_CASE("evolve_to_equilibrium flags non-convergence and records a trajectory") {
    const double alpha = 2.805e-22;
    const double d = alpha * k_boltzmann * 50e-6;
    auto force = [alpha, d](const Vec3&, const Vec3& v) {
        ForceSample f;
        f.force = -alpha * v;
        f.diffusion = {d, d, d};
        return f;
    };
    EnsembleState state = init_ensemble(256, 400e-6, 50e-6, kTm, 21);
    EvolveOptions opt;
    opt.dt = 2e-5;
    opt.window = 2e-4;
    opt.gravity = false;
    SUBCASE("too little time: not converged") {
        opt.max_time = 6e-4;  // far below the 1 ms relaxation time
        const EvolveResult r = evolve_to_equilibrium(state, force, kTm, opt);
        CHECK_FALSE(r.converged);
        CHECK(r.trajectory.size() > 0);
    }
    SUBCASE("enough time: converged near D/alpha") {
        opt.max_time = 30e-3;
        const EvolveResult r = evolve_to_equilibrium(state, force, kTm, opt);
        CHECK(r.converged);
        CHECK(r.stats.temperature == Approx(50e-6).epsilon(0.15));
        CHECK(r.elapsed <= opt.max_time + opt.dt);
        // Cooling from 400 uK toward 50 uK is monotone to within noise.
        CHECK(r.trajectory.front().temperature > r.trajectory.back().temperature);
    }
    CHECK_THROWS_AS(
        [&] {
            EvolveOptions bad;
            bad.dt = 0.0;
            evolve_to_equilibrium(state, force, kTm, bad);
        }(),
        std::invalid_argument);
}

TEST_CASE("snapshot and trajectory CSV export") {
    EnsembleState state;
    state.positions = {{1e-3, 2e-3, 3e-3}, {0, 0, 0}};
    state.velocities = {{0.1, 0.2, 0.3}, {0, 0, 0}};
    const std::string snap = "test_langevin_snap.csv";
    write_snapshot_csv(snap, state);
    std::ifstream in(snap);
    std::string header;
    std::getline(in, header);
    CHECK(header == "index,x,y,z,vx,vy,vz");
    std::string row;
    std::getline(in, row);
    // Values round-trip exactly through the %.17g formatting.
    double x, y, z, vx, vy, vz;
    int idx;
    REQUIRE(std::sscanf(row.c_str(), "%d,%lf,%lf,%lf,%lf,%lf,%lf", &idx, &x, &y,
                        &z, &vx, &vy, &vz) == 7);
    CHECK(idx == 0);
    CHECK(x == 1e-3);
    CHECK(z == 3e-3);
    CHECK(vx == 0.1);
    CHECK(vz == 0.3);
    in.close();
    std::remove(snap.c_str());

    const std::string traj = "test_langevin_traj.csv";
    write_trajectory_csv(traj, {{1e-3, 100e-6, 80e-6}});
    std::ifstream tin(traj);
    std::getline(tin, header);
    CHECK(header == "time,T,radius");
    tin.close();
    std::remove(traj.c_str());
}
