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

#pragma once

#include <cstdint>
#include <vector>

#include "wec/particles.hpp"
#include "wec/sph.hpp"

namespace wec {

enum class BodyDof : std::uint8_t { HeaveOnly = 0, Free = 1 };

// Linear interpolation of the PTO coefficient between two anchors. Inactive
// schedules leave the externally set kp untouched; active ones clamp to the
// anchor values outside [t_a, t_b].
struct KpSchedule {
    bool active = false;
    double kp_a = 0.0, kp_b = 0.0;
    double t_a = 0.0, t_b = 0.0;

    double value(double t) const {
        if (t <= t_a) return kp_a;
        if (t >= t_b) return kp_b;
        return kp_a + (kp_b - kp_a) * (t - t_a) / (t_b - t_a);
    }
};

struct RigidBodyState {
    double mass = 1.0;
    double inertia = 1.0;             // about the y axis (2-D pitch)
    double r0x = 0.0, r0y = 0.0, r0z = 0.0; // centre of mass
    double vx = 0.0, vy = 0.0, vz = 0.0;
    double omega = 0.0;               // angular velocity about y
    double phi = 0.0;                 // accumulated pitch angle
    double z0 = 0.0;                  // heave reference (initial r0z)
    double v_prev = 0.0;              // heave velocity one step back
    double a_z = 0.0;                 // latest heave acceleration
    double kp = 0.0;                  // PTO damping, N s/m
    BodyDof dof = BodyDof::HeaveOnly;
    KpSchedule schedule;
};

// A floating body and its dummy particles. Offsets are body-frame positions
// relative to the initial centre of mass; the particle index list is
// ascending so force reductions are fixed-order.
struct FloatingBody {
    RigidBodyState state;
    std::vector<std::uint32_t> particles;
    std::vector<double> off_x, off_y, off_z;
    double half_width = 0.0; // horizontal half extent, for gauge placement
};

struct BodyForce {
    double fx = 0.0, fy = 0.0, fz = 0.0;
    double tx = 0.0, ty = 0.0, tz = 0.0; // torque about the centre of mass
};

// Fluid force and torque on one body: fixed-order sums of the per-particle
// fluid pressure forces from the rate evaluation. Gravity is not included.
BodyForce accumulate_body_forces(const ParticleSystem& ps, const SphRates& rates,
                                 const std::vector<FloatingBody>& bodies,
                                 int body_id);

// linear PTO damper on heave
inline double pto_force(double kp, double v) { return -kp * v; }

// P = kp ((v_n + v_prev)/2)^2
double instantaneous_power(double kp, double v_n, double v_prev);

// trapezoidal mean of P over [t0, t0 + t_window]; the samples must cover the
// window, interior window edges are handled by linear interpolation
double average_power(const std::vector<double>& t, const std::vector<double>& p,
                     double t0, double t_window);

// trapezoidal energy accumulator for one body's PTO output
struct PowerAccumulator {
    double energy = 0.0;
    double p_prev = 0.0;
    bool primed = false;

    void add(double p, double dt) {
        if (primed) energy += 0.5 * dt * (p + p_prev);
        p_prev = p;
        primed = true;
    }
};

// vertical acceleration of the heave DOF: (F_fluid,z - M g + F_pto)/M
double heave_acceleration(const RigidBodyState& b, double fz_fluid, double vz, double g);

// Two-stage symplectic advance, matching the fluid split. begin caches the
// start-of-step state; predict moves to the half step using start-of-step
// forces; correct completes the step using half-step forces.
struct BodyStepCache {
    double vx, vy, vz, x, y, z, omega, phi;
};

BodyStepCache body_begin_step(const RigidBodyState& b);
void body_predict(RigidBodyState& b, const BodyStepCache& c, const BodyForce& f,
                  double g, double dt);
void body_correct(RigidBodyState& b, const BodyStepCache& c, const BodyForce& f,
                  double g, double dt);

// Write body-particle positions and velocities for the current rigid state.
void place_body_particles(ParticleSystem& ps, const FloatingBody& b);

} // namespace wec
