// Scene construction and time integration: lattice layout invariants,
// CFL bound, event-clipped stepping, still-water stability, floater
// equilibrium, and byte-exact snapshot round trips.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "wec/simulation.hpp"

using namespace wec;

namespace {

SceneSpec still_tank() {
    SceneSpec s;
    s.dim = 2;
    s.dp = 0.02;
    s.length = 0.6;
    s.depth = 0.2;
    s.freeboard = 0.12;
    s.wave_kind = WaveKind::None;
    s.damping_zone = false;
    return s;
}

SceneSpec wave_tank() {
    SceneSpec s;
    s.dim = 2;
    s.dp = 0.02;
    s.length = 2.4;
    s.depth = 0.3;
    s.freeboard = 0.16;
    s.wave_kind = WaveKind::Regular;
    s.wave_height = 0.05;
    s.wave_period = 1.0;
    s.damping_zone = true;
    s.damping_length = 0.8;
    return s;
}

double min_pair_distance(const ParticleSystem& ps) {
    double best = 1e300;
    for (std::size_t i = 0; i < ps.count(); ++i)
        for (std::size_t j = i + 1; j < ps.count(); ++j) {
            const double dx = ps.x[i] - ps.x[j];
            const double dy = ps.y[i] - ps.y[j];
            const double dz = ps.z[i] - ps.z[j];
            best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
        }
    return best;
}

double max_fluid_speed(const ParticleSystem& ps) {
    double best = 0.0;
    for (std::size_t i = 0; i < ps.fluid_count; ++i) {
        const double v2 = ps.vx[i] * ps.vx[i] + ps.vy[i] * ps.vy[i] +
                          ps.vz[i] * ps.vz[i];
        best = std::max(best, v2);
    }
    return std::sqrt(best);
}

bool same_particles(const ParticleSystem& a, const ParticleSystem& b) {
    auto eq = [](const std::vector<double>& u, const std::vector<double>& v) {
        return u.size() == v.size() &&
               std::memcmp(u.data(), v.data(), u.size() * sizeof(double)) == 0;
    };
    return eq(a.x, b.x) && eq(a.y, b.y) && eq(a.z, b.z) && eq(a.vx, b.vx) &&
           eq(a.vy, b.vy) && eq(a.vz, b.vz) && eq(a.rho, b.rho) && eq(a.p, b.p);
}

} // namespace

TEST_CASE("scene: still tank lattice counts and ordering") {
    Scene sc = build_scene(still_tank());
    const ParticleSystem& ps = sc.ps;

    CHECK(ps.fluid_count == 300); // 30 columns x 10 rows
    for (std::size_t i = 0; i < ps.fluid_count; ++i)
        CHECK(ps.kind[i] == ParticleKind::Fluid);
    REQUIRE(ps.boundary_index.size() == ps.count() - ps.fluid_count);
    for (std::size_t k = 0; k < ps.boundary_index.size(); ++k) {
        CHECK(ps.boundary_index[k] == ps.fluid_count + k);
        CHECK(is_boundary(ps.kind[ps.boundary_index[k]]));
    }
    CHECK(!sc.has_wavemaker);
    CHECK(sc.piston_particles.empty()); // piston becomes a static wall
    CHECK(!sc.damping_on);

    // nothing overlaps and nothing sits closer than one spacing
    CHECK(min_pair_distance(ps) >= ps.dp - 1e-9);

    // hydrostatic seeding: densities grow downward, pressures match the EOS
    for (std::size_t i = 0; i < ps.count(); ++i) {
        CHECK(ps.p[i] == doctest::Approx(sc.eos.pressure(ps.rho[i])).epsilon(1e-12));
        if (ps.z[i] >= sc.still_level) CHECK(ps.rho[i] == 1000.0);
    }
    const double rho_bottom = hydrostatic_density(sc.eos, 9.81, 0.2, 0.01);
    bool found = false;
    for (std::size_t i = 0; i < ps.fluid_count; ++i)
        if (std::abs(ps.z[i] - 0.01) < 1e-12) {
            CHECK(ps.rho[i] == doctest::Approx(rho_bottom).epsilon(1e-14));
            found = true;
        }
    CHECK(found);
}

TEST_CASE("scene: floater carve-out and mass budget") {
    SceneSpec spec = still_tank();
    spec.length = 1.6;
    spec.depth = 0.3;
    BodySpec b;
    b.xc = 0.8;
    b.width = 0.3;
    b.height = 0.16;
    b.draft = 0.08;
    b.kp = 400.0;
    spec.bodies.push_back(b);

    Scene sc = build_scene(spec);
    const ParticleSystem& ps = sc.ps;
    REQUIRE(sc.bodies.size() == 1);
    const FloatingBody& fb = sc.bodies[0];

    CHECK(fb.state.mass == doctest::Approx(1000.0 * 0.3 * 0.08).epsilon(1e-12));
    CHECK(fb.state.r0z == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fb.particles.size() == 15 * 8); // 15 columns, 8 rows

    double body_mass = 0.0;
    for (std::size_t t = 0; t < fb.particles.size(); ++t) {
        const std::uint32_t k = fb.particles[t];
        CHECK(ps.kind[k] == ParticleKind::Body);
        CHECK(ps.body[k] == 0);
        body_mass += ps.m[k];
        if (t > 0) CHECK(fb.particles[t] > fb.particles[t - 1]);
    }
    CHECK(body_mass == doctest::Approx(fb.state.mass).epsilon(1e-12));

    // body rows carry the material density, so m/rho is the lattice volume
    const double rho_mat = fb.state.mass / (120.0 * ps.dp * ps.dp);
    for (std::uint32_t k : fb.particles) {
        CHECK(ps.rho[k] == doctest::Approx(rho_mat).epsilon(1e-12));
        CHECK(ps.m[k] / ps.rho[k] == doctest::Approx(ps.dp * ps.dp).epsilon(1e-12));
    }

    // no fluid inside the inflated footprint
    for (std::size_t i = 0; i < ps.fluid_count; ++i) {
        const bool inside = std::abs(ps.x[i] - 0.8) <= 0.15 + 0.5 * ps.dp &&
                            ps.z[i] >= 0.3 - 0.08 - 0.5 * ps.dp;
        CHECK(!inside);
    }
    CHECK(min_pair_distance(ps) >= ps.dp - 1e-9);
}

TEST_CASE("scene: wave tank carries piston, ramp and damping zone") {
    Scene sc = build_scene(wave_tank());
    CHECK(sc.has_wavemaker);
    CHECK(sc.wavemaker.regular);
    CHECK(sc.wavemaker.ramp_period == 1.0);
    REQUIRE(sc.wavemaker.components.size() == 1);
    CHECK(sc.wavemaker.components[0].s0 ==
          doctest::Approx(regular_stroke(0.05, 1.0, 0.3)).epsilon(1e-14));
    CHECK(sc.damping_on);
    CHECK(sc.damping.x_start == doctest::Approx(1.6));
    CHECK(sc.damping.x_end == doctest::Approx(2.4));
    REQUIRE(!sc.piston_particles.empty());
    CHECK(sc.piston_particles.size() % 4 == 0);
    for (double off : sc.piston_off_x) CHECK(off < 0.0);
    for (std::uint32_t k : sc.piston_particles)
        CHECK(sc.ps.kind[k] == ParticleKind::Piston);
}

TEST_CASE("scene: 3-D box tank") {
    SceneSpec s;
    s.dim = 3;
    s.dp = 0.05;
    s.length = 0.6;
    s.breadth = 0.2;
    s.depth = 0.35;
    s.freeboard = 0.2;
    s.wave_kind = WaveKind::None;
    s.damping_zone = false;
    Scene sc = build_scene(s);
    CHECK(sc.ps.fluid_count == 12 * 4 * 7);
    CHECK(min_pair_distance(sc.ps) >= s.dp - 1e-9);
}

TEST_CASE("scene: invalid layouts are rejected") {
    CHECK_THROWS_AS([] { SceneSpec s = still_tank(); s.dim = 4; build_scene(s); }(),
                    Error);
    CHECK_THROWS_AS([] { SceneSpec s = still_tank(); s.depth = 0.05; build_scene(s); }(),
                    Error);
    CHECK_THROWS_AS(
        [] { SceneSpec s = still_tank(); s.freeboard = 0.02; build_scene(s); }(),
        Error);
    CHECK_THROWS_AS(
        [] {
            SceneSpec s = still_tank();
            BodySpec b;
            b.xc = 0.3;
            b.width = 0.1;
            b.height = 0.08;
            b.draft = 0.09; // deeper than the body is tall
            s.bodies.push_back(b);
            build_scene(s);
        }(),
        Error);
    CHECK_THROWS_AS(
        [] {
            SceneSpec s = wave_tank();
            s.damping_length = 2.3; // nearly the whole tank
            build_scene(s);
        }(),
        Error);
    CHECK_THROWS_AS([] { SceneSpec s; s.dim = 3; s.breadth = 0.0; build_scene(s); }(),
                    Error);
}

TEST_CASE("cfl bound: acoustic and acceleration limits") {
    SphRates r;
    r.resize(4);
    // all quiet: the acoustic limit alone sets the step
    CHECK(cfl_timestep(r, 4, 0.02, 40.0, 0.2) == doctest::Approx(1e-4).epsilon(1e-14));
    // one violent particle takes over: sqrt(h/|a|) < h/cf
    r.az[2] = -320000.0;
    CHECK(cfl_timestep(r, 4, 0.02, 40.0, 0.2) == doctest::Approx(5e-5).epsilon(1e-14));
    // boundary rows beyond n_fluid are ignored
    CHECK(cfl_timestep(r, 2, 0.02, 40.0, 0.2) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK_THROWS_AS(cfl_timestep(r, 4, 0.0, 40.0, 0.2), Error);
}

TEST_CASE("simulation: still water stays still") {
    Simulation sim(still_tank());
    sim.advance_to(2.0);
    CHECK(sim.time() == 2.0);
    CHECK(sim.steps() > 100);

    const double dp = sim.particles().dp;
    for (double xg : {0.15, 0.3, 0.45})
        CHECK(std::abs(sim.gauge(xg)) < 0.5 * dp);
    CHECK(max_fluid_speed(sim.particles()) < 0.1);

    // densities stayed near the hydrostatic profile
    const ParticleSystem& ps = sim.particles();
    for (std::size_t i = 0; i < ps.fluid_count; ++i) {
        CHECK(ps.rho[i] > 990.0);
        CHECK(ps.rho[i] < 1015.0);
    }
}

TEST_CASE("simulation: event-clipped stepping lands exactly on targets") {
    Simulation sim(still_tank());
    sim.advance_to(0.01);
    CHECK(sim.time() == 0.01);
    const std::uint64_t n1 = sim.steps();
    sim.advance_to(0.01); // no-op
    CHECK(sim.steps() == n1);
    sim.advance_to(0.013);
    CHECK(sim.time() == 0.013);
    CHECK_THROWS_AS(sim.advance_to(0.005), Error);
}

TEST_CASE("simulation: fixed dt is honoured and validated") {
    Simulation sim(still_tank());
    sim.step();
    const double bound = sim.last_cfl_dt();
    CHECK(bound > 0.0);

    Simulation fixed(still_tank());
    fixed.params.fixed_dt = 0.5 * bound;
    fixed.advance_to(0.05);
    CHECK(fixed.time() == 0.05);
    const double expected = 0.05 / (0.5 * bound);
    CHECK(std::abs((double)fixed.steps() - expected) <= 1.0 + 1e-9);

    Simulation bad(still_tank());
    bad.params.fixed_dt = 1.0;
    CHECK_THROWS_AS(bad.step(), Error);
}

TEST_CASE("simulation: piston drives fluid") {
    Simulation sim(wave_tank());
    sim.advance_to(0.4);
    const Scene& sc = sim.scene();
    const PistonState s = ramped_piston_state(sc.wavemaker, sim.time());
    const std::uint32_t k0 = sc.piston_particles[0];
    CHECK(sim.particles().x[k0] == s.x + sc.piston_off_x[0]);
    CHECK(sim.particles().vx[k0] == s.v);
    CHECK(max_fluid_speed(sim.particles()) > 0.01);
}

TEST_CASE("simulation: floater settles near its design draft") {
    SceneSpec spec = still_tank();
    spec.length = 1.6;
    spec.depth = 0.3;
    BodySpec b;
    b.xc = 0.8;
    b.width = 0.3;
    b.height = 0.16;
    b.draft = 0.08;
    b.kp = 400.0;
    spec.bodies.push_back(b);

    Simulation sim(spec);
    sim.advance_to(1.5);
    const RigidBodyState& st = sim.bodies()[0].state;
    CHECK(std::abs(st.r0z - st.z0) < 1.5 * spec.dp);
    CHECK(std::abs(st.vz) < 0.05);
    CHECK(sim.pto_energy(0) >= 0.0);
    CHECK(sim.pto_power(0) >= 0.0);

    // body particles track the rigid state exactly, and the boundary
    // pressure update never rewrites their material density
    const FloatingBody& fb = sim.bodies()[0];
    const ParticleSystem& ps = sim.particles();
    const double rho_mat = st.mass / ((double)fb.particles.size() * ps.dp * ps.dp);
    for (std::size_t t = 0; t < fb.particles.size(); ++t) {
        const std::uint32_t k = fb.particles[t];
        CHECK(ps.z[k] == st.r0z + fb.off_z[t]);
        CHECK(ps.vz[k] == st.vz);
        CHECK(ps.rho[k] == rho_mat);
    }
}

TEST_CASE("snapshot: byte-exact round trip and bitwise continuation") {
    SceneSpec spec = wave_tank();
    BodySpec b;
    b.xc = 1.0;
    b.width = 0.2;
    b.height = 0.12;
    b.draft = 0.06;
    b.kp = 200.0;
    spec.bodies.push_back(b);

    Simulation sim(spec, 7);
    sim.rng().uniform01(); // move the RNG off its seed state
    sim.advance_to(0.3);
    const std::vector<char> snap = sim.snapshot();

    // restore into the same simulation: re-snapshot is identical
    sim.restore(snap);
    const std::vector<char> snap2 = sim.snapshot();
    REQUIRE(snap.size() == snap2.size());
    CHECK(std::memcmp(snap.data(), snap2.data(), snap.size()) == 0);

    // restore into a fresh simulation: continuations agree bitwise
    Simulation twin(spec, 99);
    twin.restore(snap);
    CHECK(twin.time() == sim.time());
    CHECK(twin.steps() == sim.steps());
    CHECK(twin.rng().uniform01() == sim.rng().uniform01());

    sim.restore(snap);
    twin.restore(snap);
    sim.advance_to(0.6);
    twin.advance_to(0.6);
    CHECK(same_particles(sim.particles(), twin.particles()));
    CHECK(sim.bodies()[0].state.r0z == twin.bodies()[0].state.r0z);
    CHECK(sim.bodies()[0].state.vz == twin.bodies()[0].state.vz);
    CHECK(sim.pto_energy(0) == twin.pto_energy(0));
    CHECK(sim.snapshot() == twin.snapshot());
}

TEST_CASE("snapshot: version and shape mismatches are refused") {
    Simulation sim(still_tank());
    sim.advance_to(0.02);
    std::vector<char> snap = sim.snapshot();

    // wrong version word (follows the 8-byte length + 7 magic bytes)
    std::vector<char> bad = snap;
    bad[15] = 9;
    CHECK_THROWS_AS(sim.restore(bad), Error);

    // truncated payload
    std::vector<char> cut(snap.begin(), snap.end() - 16);
    CHECK_THROWS_AS(sim.restore(cut), Error);

    // a differently shaped scene refuses the snapshot
    SceneSpec other = still_tank();
    other.length = 0.8;
    Simulation sim2(other);
    CHECK_THROWS_AS(sim2.restore(snap), Error);

    // and the original still accepts it after the failed attempts above
    Simulation sim3(still_tank());
    sim3.restore(snap);
    CHECK(sim3.time() == sim.time());
}
