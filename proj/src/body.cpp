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

#include "wec/body.hpp"

#include <cmath>
#include <string>

#include "wec/error.hpp"

namespace wec {

BodyForce accumulate_body_forces(const ParticleSystem& ps, const SphRates& rates,
                                 const std::vector<FloatingBody>& bodies,
                                 int body_id) {
    require(body_id >= 0 && static_cast<std::size_t>(body_id) < bodies.size(),
            ErrorCode::InvalidArgument,
            "unknown body id " + std::to_string(body_id));
    const FloatingBody& b = bodies[body_id];
    BodyForce f;
    for (std::uint32_t k : b.particles) {
        const double fx = rates.fx[k], fy = rates.fy[k], fz = rates.fz[k];
        f.fx += fx;
        f.fy += fy;
        f.fz += fz;
        const double dx = ps.x[k] - b.state.r0x;
        const double dy = ps.y[k] - b.state.r0y;
        const double dz = ps.z[k] - b.state.r0z;
        f.tx += dy * fz - dz * fy;
        f.ty += dz * fx - dx * fz;
        f.tz += dx * fy - dy * fx;
    }
    return f;
}

double instantaneous_power(double kp, double v_n, double v_prev) {
    require(kp >= 0.0, ErrorCode::InvalidArgument, "PTO damping must be non-negative");
    const double vm = 0.5 * (v_n + v_prev);
    return kp * vm * vm;
}

double average_power(const std::vector<double>& t, const std::vector<double>& p,
                     double t0, double t_window) {
    require(t.size() == p.size() && t.size() >= 2, ErrorCode::InvalidArgument,
            "average_power: need a sampled series");
    require(t_window > 0.0, ErrorCode::InvalidArgument, "average_power: empty window");
    const double t1 = t0 + t_window;
    require(t.front() <= t0 + 1e-12 && t.back() >= t1 - 1e-12, ErrorCode::InvalidArgument,
            "average_power: series does not cover the window");

    auto value_at = [&](double tt, std::size_t hint) {
        std::size_t i = hint;
        while (i + 1 < t.size() && t[i + 1] < tt) ++i;
        const double span = t[i + 1] - t[i];
        const double w = span > 0.0 ? (tt - t[i]) / span : 0.0;
        return p[i] + w * (p[i + 1] - p[i]);
    };

    double integral = 0.0;
    double prev_t = t0;
    double prev_p = value_at(t0, 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] <= t0) continue;
        if (t[i] >= t1) break;
        integral += 0.5 * (t[i] - prev_t) * (p[i] + prev_p);
        prev_t = t[i];
        prev_p = p[i];
    }
    const double p_end = value_at(t1, 0);
    integral += 0.5 * (t1 - prev_t) * (p_end + prev_p);
    return integral / t_window;
}

double heave_acceleration(const RigidBodyState& b, double fz_fluid, double vz, double g) {
    return (fz_fluid + pto_force(b.kp, vz)) / b.mass - g;
}

BodyStepCache body_begin_step(const RigidBodyState& b) {
    return BodyStepCache{b.vx, b.vy, b.vz, b.r0x, b.r0y, b.r0z, b.omega, b.phi};
}

void body_predict(RigidBodyState& b, const BodyStepCache& c, const BodyForce& f,
                  double g, double dt) {
    const double half = 0.5 * dt;
    const double az = heave_acceleration(b, f.fz, c.vz, g);
    if (b.dof == BodyDof::HeaveOnly) {
        b.vz = c.vz + half * az;
        b.r0z = c.z + half * c.vz;
        return;
    }
    const double ax = f.fx / b.mass;
    const double alpha = f.ty / b.inertia;
    b.vx = c.vx + half * ax;
    b.vz = c.vz + half * az;
    b.omega = c.omega + half * alpha;
    b.r0x = c.x + half * c.vx;
    b.r0z = c.z + half * c.vz;
    b.phi = c.phi + half * c.omega;
}

void body_correct(RigidBodyState& b, const BodyStepCache& c, const BodyForce& f,
                  double g, double dt) {
    const double az = heave_acceleration(b, f.fz, b.vz, g);
    if (b.dof == BodyDof::HeaveOnly) {
        const double vz_new = c.vz + dt * az;
        b.r0z = c.z + 0.5 * dt * (c.vz + vz_new);
        b.vz = vz_new;
        b.a_z = az;
        return;
    }
    const double ax = f.fx / b.mass;
    const double alpha = f.ty / b.inertia;
    const double vx_new = c.vx + dt * ax;
    const double vz_new = c.vz + dt * az;
    const double om_new = c.omega + dt * alpha;
    b.r0x = c.x + 0.5 * dt * (c.vx + vx_new);
    b.r0z = c.z + 0.5 * dt * (c.vz + vz_new);
    b.phi = c.phi + 0.5 * dt * (c.omega + om_new);
    b.vx = vx_new;
    b.vz = vz_new;
    b.omega = om_new;
    b.a_z = az;
}

void place_body_particles(ParticleSystem& ps, const FloatingBody& b) {
    const RigidBodyState& s = b.state;
    const bool heave = (s.dof == BodyDof::HeaveOnly);
    const double cph = std::cos(s.phi), sph = std::sin(s.phi);
    for (std::size_t t = 0; t < b.particles.size(); ++t) {
        const std::uint32_t k = b.particles[t];
        double dx = b.off_x[t], dy = b.off_y[t], dz = b.off_z[t];
        if (!heave) {
            const double rx = cph * dx + sph * dz;
            const double rz = -sph * dx + cph * dz;
            dx = rx;
            dz = rz;
        }
        ps.x[k] = s.r0x + dx;
        ps.y[k] = s.r0y + dy;
        ps.z[k] = s.r0z + dz;
        if (heave) {
            ps.vx[k] = 0.0;
            ps.vy[k] = 0.0;
            ps.vz[k] = s.vz;
        } else {
            ps.vx[k] = s.vx + s.omega * dz;
            ps.vy[k] = s.vy;
            ps.vz[k] = s.vz - s.omega * dx;
        }
    }
}

} // namespace wec
