/*
Copyright 2026 the wecsim authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "wec/simulation.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "wec/error.hpp"

namespace wec {

double cfl_timestep(const SphRates& rates, std::size_t n_fluid, double h, double cf,
                    double cfl) {
    require(h > 0.0 && cf > 0.0 && cfl > 0.0, ErrorCode::InvalidArgument,
            "cfl_timestep needs positive h, cf and cfl");
    double bound = h / cf;
    for (std::size_t i = 0; i < n_fluid; ++i) {
        const double a2 = rates.ax[i] * rates.ax[i] + rates.ay[i] * rates.ay[i] +
                          rates.az[i] * rates.az[i];
        if (a2 > 0.0) {
            const double b = std::sqrt(h / std::sqrt(a2));
            if (b < bound) bound = b;
        }
    }
    const double dt = cfl * bound;
    require(std::isfinite(dt) && dt > 0.0, ErrorCode::Numeric,
            "time step collapsed to zero");
    return dt;
}

Simulation::Simulation(const SceneSpec& spec, std::uint64_t seed)
    : sc_(build_scene(spec)), rng_(seed) {
    const std::size_t n = sc_.ps.count();
    rates_.resize(n);
    acc_x_.assign(n, 0.0);
    acc_y_.assign(n, 0.0);
    acc_z_.assign(n, 0.0);
    vx0_.assign(sc_.ps.fluid_count, 0.0);
    vy0_.assign(sc_.ps.fluid_count, 0.0);
    vz0_.assign(sc_.ps.fluid_count, 0.0);
    rho0_.assign(sc_.ps.fluid_count, 0.0);
    pto_acc_.resize(sc_.bodies.size());
    pto_power_.assign(sc_.bodies.size(), 0.0);
    place_piston(0.0);
}

void Simulation::place_piston(double t) {
    if (!sc_.has_wavemaker) return;
    const PistonState s = ramped_piston_state(sc_.wavemaker, t);
    ParticleSystem& ps = sc_.ps;
    for (std::size_t j = 0; j < sc_.piston_particles.size(); ++j) {
        const std::uint32_t k = sc_.piston_particles[j];
        ps.x[k] = s.x + sc_.piston_off_x[j];
        ps.vx[k] = s.v;
    }
}

void Simulation::refresh_boundary_accels(double boundary_time) {
    if (sc_.has_wavemaker) {
        const PistonState s = ramped_piston_state(sc_.wavemaker, boundary_time);
        for (std::uint32_t k : sc_.piston_particles) acc_x_[k] = s.a;
    }
    for (const FloatingBody& b : sc_.bodies)
        for (std::uint32_t k : b.particles) acc_z_[k] = b.state.a_z;
}

void Simulation::stage_rates(double boundary_time, bool rebuild_neighbors) {
    ParticleSystem& ps = sc_.ps;
    if (rebuild_neighbors || !params.reuse_half_step_neighbors)
        nl_.build(ps, sc_.kernel.support);
    update_fluid_pressure(ps, sc_.eos);
    refresh_boundary_accels(boundary_time);
    shepard_boundary_update(ps, nl_, sc_.kernel, sc_.eos, sc_.sph, acc_x_.data(),
                            acc_y_.data(), acc_z_.data());
    compute_rates(ps, nl_, sc_.kernel, sc_.eos, sc_.sph, rates_);
}

void Simulation::step(double dt_cap) {
    require(dt_cap > 0.0, ErrorCode::InvalidArgument, "step needs a positive dt cap");
    ParticleSystem& ps = sc_.ps;
    const std::size_t nf = ps.fluid_count;
    const double g = sc_.sph.g;

    for (FloatingBody& b : sc_.bodies)
        if (b.state.schedule.active) b.state.kp = b.state.schedule.value(t_);

    // stage A: rates at the start-of-step state (boundaries sit at t_)
    stage_rates(t_);
    last_cfl_dt_ = cfl_timestep(rates_, nf, sc_.kernel.h, sc_.eos.cf, params.cfl);

    double dt = last_cfl_dt_;
    if (params.fixed_dt > 0.0) {
        require(params.fixed_dt <= last_cfl_dt_ * (1.0 + 1e-12), ErrorCode::Numeric,
                "fixed dt " + std::to_string(params.fixed_dt) +
                    " exceeds the CFL bound " + std::to_string(last_cfl_dt_) +
                    " at t = " + std::to_string(t_));
        dt = params.fixed_dt;
    }
    if (dt > dt_cap) dt = dt_cap;
    last_dt_ = dt;

    std::memcpy(vx0_.data(), ps.vx.data(), nf * sizeof(double));
    std::memcpy(vy0_.data(), ps.vy.data(), nf * sizeof(double));
    std::memcpy(vz0_.data(), ps.vz.data(), nf * sizeof(double));
    std::memcpy(rho0_.data(), ps.rho.data(), nf * sizeof(double));

    std::vector<BodyStepCache> caches(sc_.bodies.size());
    std::vector<BodyForce> forces(sc_.bodies.size());
    for (std::size_t b = 0; b < sc_.bodies.size(); ++b) {
        caches[b] = body_begin_step(sc_.bodies[b].state);
        forces[b] = accumulate_body_forces(ps, rates_, sc_.bodies, (int)b);
        RigidBodyState& s = sc_.bodies[b].state;
        s.a_z = heave_acceleration(s, forces[b].fz, s.vz, g);
    }

    // predictor: move everything to t + dt/2
    const double half = 0.5 * dt;
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < (long long)nf; ++ii) {
        const std::size_t i = (std::size_t)ii;
        ps.x[i] += half * ps.vx[i];
        ps.y[i] += half * ps.vy[i];
        ps.z[i] += half * ps.vz[i];
        ps.vx[i] += half * rates_.ax[i];
        ps.vy[i] += half * rates_.ay[i];
        ps.vz[i] += half * rates_.az[i];
        ps.rho[i] += half * rates_.drho[i];
    }
    for (std::size_t b = 0; b < sc_.bodies.size(); ++b) {
        body_predict(sc_.bodies[b].state, caches[b], forces[b], g, dt);
        place_body_particles(ps, sc_.bodies[b]);
    }
    place_piston(t_ + half);

    // stage B: rates at the half state
    stage_rates(t_ + half, false);
    for (std::size_t b = 0; b < sc_.bodies.size(); ++b)
        forces[b] = accumulate_body_forces(ps, rates_, sc_.bodies, (int)b);

    // corrector
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < (long long)nf; ++ii) {
        const std::size_t i = (std::size_t)ii;
        const double vxn = vx0_[i] + dt * rates_.ax[i];
        const double vyn = vy0_[i] + dt * rates_.ay[i];
        const double vzn = vz0_[i] + dt * rates_.az[i];
        ps.x[i] += half * vxn;
        ps.y[i] += half * vyn;
        ps.z[i] += half * vzn;
        ps.vx[i] = vxn;
        ps.vy[i] = vyn;
        ps.vz[i] = vzn;
        const double eps = -(rates_.drho[i] / ps.rho[i]) * dt;
        ps.rho[i] = rho0_[i] * (2.0 - eps) / (2.0 + eps);
    }
    for (std::size_t b = 0; b < sc_.bodies.size(); ++b) {
        body_correct(sc_.bodies[b].state, caches[b], forces[b], g, dt);
        place_body_particles(ps, sc_.bodies[b]);
    }
    place_piston(t_ + dt);

    for (std::size_t i = 0; i < nf; ++i)
        require(std::isfinite(ps.rho[i]) && ps.rho[i] > 0.0, ErrorCode::Numeric,
                "non-positive density " + std::to_string(ps.rho[i]) +
                    " at particle " + std::to_string(i) + ", t = " +
                    std::to_string(t_));

    if (sc_.damping_on) apply_damping_zone(ps, sc_.damping, dt);

    t_ += dt;
    ++nsteps_;

    for (std::size_t b = 0; b < sc_.bodies.size(); ++b) {
        RigidBodyState& s = sc_.bodies[b].state;
        const double p = instantaneous_power(s.kp, s.vz, s.v_prev);
        pto_acc_[b].add(p, dt);
        pto_power_[b] = p;
        s.v_prev = s.vz;
    }
}

void Simulation::advance_to(double t_target) {
    require(t_target >= t_ - 1e-12, ErrorCode::InvalidArgument,
            "target time precedes the current time");
    while (t_ < t_target - 1e-12) {
        step(t_target - t_);
        if (std::abs(t_target - t_) < 1e-12) t_ = t_target;
    }
}

double Simulation::gauge(double x, double y) const {
    return gauge_elevation(sc_.ps, x, y, sc_.still_level);
}

double Simulation::pto_power(std::size_t body) const {
    require(body < pto_power_.size(), ErrorCode::InvalidArgument, "unknown body");
    return pto_power_[body];
}

double Simulation::pto_energy(std::size_t body) const {
    require(body < pto_acc_.size(), ErrorCode::InvalidArgument, "unknown body");
    return pto_acc_[body].energy;
}

// --- snapshots ---
//
// Named, type-tagged fields in fixed order. The names make shape or format
// drift fail loudly instead of silently misreading bytes.

namespace {

constexpr std::uint32_t kSnapshotVersion = 1;

enum FieldTag : std::uint8_t {
    kF64 = 0,
    kU64 = 1,
    kU8 = 2,
    kStr = 3,
    kVecF64 = 4,
    kVecU8 = 5,
    kVecU32 = 6,
    kVecI32 = 7,
};

void put(ByteWriter& w, const char* name, FieldTag tag) {
    w.str(name);
    w.u8(tag);
}

void expect(ByteReader& r, const char* name, FieldTag tag) {
    const std::string got = r.str();
    require(got == name, ErrorCode::Version,
            "snapshot layout mismatch: expected field '" + std::string(name) +
                "', found '" + got + "'");
    require(r.u8() == tag, ErrorCode::Version,
            "snapshot type mismatch for field '" + std::string(name) + "'");
}

void check_count(const char* what, std::uint64_t got, std::uint64_t want) {
    require(got == want, ErrorCode::Version,
            std::string("snapshot shape mismatch: ") + what + " is " +
                std::to_string(got) + ", expected " + std::to_string(want));
}

} // namespace

std::vector<char> Simulation::snapshot() const {
    const ParticleSystem& ps = sc_.ps;
    ByteWriter w;
    w.str("wecsnap");
    w.u32(kSnapshotVersion);

    put(w, "dim", kU64), w.u64((std::uint64_t)ps.dim);
    put(w, "dp", kF64), w.f64(ps.dp);
    put(w, "n", kU64), w.u64(ps.count());
    put(w, "fluid_count", kU64), w.u64(ps.fluid_count);
    put(w, "time", kF64), w.f64(t_);
    put(w, "steps", kU64), w.u64(nsteps_);

    put(w, "x", kVecF64), w.vec(ps.x);
    put(w, "y", kVecF64), w.vec(ps.y);
    put(w, "z", kVecF64), w.vec(ps.z);
    put(w, "vx", kVecF64), w.vec(ps.vx);
    put(w, "vy", kVecF64), w.vec(ps.vy);
    put(w, "vz", kVecF64), w.vec(ps.vz);
    put(w, "rho", kVecF64), w.vec(ps.rho);
    put(w, "p", kVecF64), w.vec(ps.p);
    put(w, "m", kVecF64), w.vec(ps.m);
    put(w, "kind", kVecU8), w.vec(ps.kind);
    put(w, "body_id", kVecI32), w.vec(ps.body);
    put(w, "boundary_index", kVecU32), w.vec(ps.boundary_index);

    put(w, "bodies", kU64), w.u64(sc_.bodies.size());
    for (std::size_t b = 0; b < sc_.bodies.size(); ++b) {
        const RigidBodyState& s = sc_.bodies[b].state;
        w.f64(s.mass), w.f64(s.inertia);
        w.f64(s.r0x), w.f64(s.r0y), w.f64(s.r0z);
        w.f64(s.vx), w.f64(s.vy), w.f64(s.vz);
        w.f64(s.omega), w.f64(s.phi), w.f64(s.z0);
        w.f64(s.v_prev), w.f64(s.a_z), w.f64(s.kp);
        w.u8((std::uint8_t)s.dof);
        w.u8(s.schedule.active ? 1 : 0);
        w.f64(s.schedule.kp_a), w.f64(s.schedule.kp_b);
        w.f64(s.schedule.t_a), w.f64(s.schedule.t_b);
        w.vec(sc_.bodies[b].particles);
        w.vec(sc_.bodies[b].off_x);
        w.vec(sc_.bodies[b].off_y);
        w.vec(sc_.bodies[b].off_z);
        w.f64(pto_acc_[b].energy);
        w.f64(pto_acc_[b].p_prev);
        w.u8(pto_acc_[b].primed ? 1 : 0);
        w.f64(pto_power_[b]);
    }

    put(w, "wavemaker", kU8), w.u8(sc_.has_wavemaker ? 1 : 0);
    if (sc_.has_wavemaker) {
        const WaveMakerSpec& m = sc_.wavemaker;
        w.u8(m.regular ? 1 : 0);
        w.f64(m.depth), w.f64(m.h_wave), w.f64(m.t_wave), w.f64(m.ramp_period);
        w.vec(m.components);
    }

    put(w, "rng", kStr), w.str(rng_.serialize());
    return w.take();
}

void Simulation::restore(const std::vector<char>& bytes) {
    ParticleSystem& ps = sc_.ps;
    ByteReader r(bytes);

    require(r.str() == "wecsnap", ErrorCode::Version, "not a snapshot payload");
    const std::uint32_t ver = r.u32();
    require(ver == kSnapshotVersion, ErrorCode::Version,
            "unsupported snapshot version " + std::to_string(ver));

    expect(r, "dim", kU64), check_count("dim", r.u64(), (std::uint64_t)ps.dim);
    expect(r, "dp", kF64);
    const double dp = r.f64();
    require(dp == ps.dp, ErrorCode::Version, "snapshot dp differs from the scene");
    expect(r, "n", kU64), check_count("particle count", r.u64(), ps.count());
    expect(r, "fluid_count", kU64),
        check_count("fluid count", r.u64(), ps.fluid_count);
    expect(r, "time", kF64);
    const double t_new = r.f64();
    expect(r, "steps", kU64);
    const std::uint64_t steps_new = r.u64();

    auto take_f64 = [&](const char* name, std::vector<double>& dst) {
        expect(r, name, kVecF64);
        std::vector<double> v = r.vec<double>();
        check_count(name, v.size(), dst.size());
        dst = std::move(v);
    };
    take_f64("x", ps.x), take_f64("y", ps.y), take_f64("z", ps.z);
    take_f64("vx", ps.vx), take_f64("vy", ps.vy), take_f64("vz", ps.vz);
    take_f64("rho", ps.rho), take_f64("p", ps.p), take_f64("m", ps.m);

    expect(r, "kind", kVecU8);
    {
        std::vector<ParticleKind> v = r.vec<ParticleKind>();
        check_count("kind", v.size(), ps.kind.size());
        ps.kind = std::move(v);
    }
    expect(r, "body_id", kVecI32);
    {
        std::vector<std::int32_t> v = r.vec<std::int32_t>();
        check_count("body_id", v.size(), ps.body.size());
        ps.body = std::move(v);
    }
    expect(r, "boundary_index", kVecU32);
    {
        std::vector<std::uint32_t> v = r.vec<std::uint32_t>();
        check_count("boundary_index", v.size(), ps.boundary_index.size());
        ps.boundary_index = std::move(v);
    }

    expect(r, "bodies", kU64);
    check_count("body count", r.u64(), sc_.bodies.size());
    for (std::size_t b = 0; b < sc_.bodies.size(); ++b) {
        RigidBodyState& s = sc_.bodies[b].state;
        s.mass = r.f64(), s.inertia = r.f64();
        s.r0x = r.f64(), s.r0y = r.f64(), s.r0z = r.f64();
        s.vx = r.f64(), s.vy = r.f64(), s.vz = r.f64();
        s.omega = r.f64(), s.phi = r.f64(), s.z0 = r.f64();
        s.v_prev = r.f64(), s.a_z = r.f64(), s.kp = r.f64();
        s.dof = (BodyDof)r.u8();
        s.schedule.active = r.u8() != 0;
        s.schedule.kp_a = r.f64(), s.schedule.kp_b = r.f64();
        s.schedule.t_a = r.f64(), s.schedule.t_b = r.f64();
        std::vector<std::uint32_t> idx = r.vec<std::uint32_t>();
        check_count("body particles", idx.size(), sc_.bodies[b].particles.size());
        sc_.bodies[b].particles = std::move(idx);
        sc_.bodies[b].off_x = r.vec<double>();
        sc_.bodies[b].off_y = r.vec<double>();
        sc_.bodies[b].off_z = r.vec<double>();
        check_count("body offsets", sc_.bodies[b].off_x.size(),
                    sc_.bodies[b].particles.size());
        pto_acc_[b].energy = r.f64();
        pto_acc_[b].p_prev = r.f64();
        pto_acc_[b].primed = r.u8() != 0;
        pto_power_[b] = r.f64();
    }

    expect(r, "wavemaker", kU8);
    const bool has_wm = r.u8() != 0;
    require(has_wm == sc_.has_wavemaker, ErrorCode::Version,
            "snapshot wavemaker presence differs from the scene");
    if (has_wm) {
        WaveMakerSpec m;
        m.regular = r.u8() != 0;
        m.depth = r.f64(), m.h_wave = r.f64(), m.t_wave = r.f64();
        m.ramp_period = r.f64();
        m.components = r.vec<WaveComponent>();
        require(!m.components.empty(), ErrorCode::Version,
                "snapshot wavemaker has no components");
        sc_.wavemaker = std::move(m);
    }

    expect(r, "rng", kStr);
    rng_.deserialize(r.str());
    require(r.exhausted(), ErrorCode::Version, "trailing bytes after snapshot");

    t_ = t_new;
    nsteps_ = steps_new;
    last_dt_ = 0.0;
    last_cfl_dt_ = 0.0;
}

} // namespace wec
