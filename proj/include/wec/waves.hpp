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

namespace wec {

// Linear dispersion: smallest k > 0 with omega^2 = g k tanh(k d), found by
// bracketed bisection on [1e-6, 1e3] to |residual| < 1e-10.
double solve_dispersion(double t_wave, double depth, double g = 9.81);

inline double wavelength(double t_wave, double depth, double g = 9.81) {
    return 6.28318530717958647692 / solve_dispersion(t_wave, depth, g);
}

// Piston stroke producing wave height H at period T in depth d (first-order
// wavemaker theory): S0 = H [sinh(kd) cosh(kd) + kd] / (2 sinh^2(kd)).
double regular_stroke(double h_wave, double t_wave, double depth, double g = 9.81);

struct WaveComponent {
    double s0 = 0.0;    // full stroke of this component
    double omega = 0.0; // rad/s
    double theta = 0.0; // phase in [0, 2 pi)
};

// Piston wavemaker kinematics. Displacement is the superposition
//   x(t) = sum_i (S0_i / 2) sin(omega_i t + theta_i)
// (one component when regular). The simulation applies a start-up ramp that
// multiplies the displacement by min(t / ramp_period, 1).
struct WaveMakerSpec {
    bool regular = true;
    double depth = 0.0;
    double h_wave = 0.0, t_wave = 0.0; // regular-wave descriptors (0 if irregular)
    double ramp_period = 0.0;          // 0 disables the ramp
    std::vector<WaveComponent> components;
};

WaveMakerSpec make_regular_wavemaker(double h_wave, double t_wave, double theta,
                                     double depth, double g = 9.81);
WaveMakerSpec make_irregular_wavemaker(std::vector<WaveComponent> components,
                                       double depth, double ramp_period);

// un-ramped kinematics (analytic derivatives)
double piston_displacement(const WaveMakerSpec& spec, double t);
double piston_velocity(const WaveMakerSpec& spec, double t);
double piston_acceleration(const WaveMakerSpec& spec, double t);

struct PistonState {
    double x = 0.0, v = 0.0, a = 0.0;
};

// kinematics with the start-up ramp folded in (product rule on r(t) x(t))
PistonState ramped_piston_state(const WaveMakerSpec& spec, double t);

// JONSWAP spectral components: N equal bins on [f_start, f_stop], sampled at
// midpoints, peak enhancement gamma_s, spectrum rescaled so the discrete sum
// satisfies 4 sqrt(sum S df) = Hs exactly. Component heights are
// H_i = 2 sqrt(2 S(f_i) df); strokes follow the regular-stroke transfer
// function at each component period; phases are uniform in [0, 2 pi) from
// the seeded generator.
std::vector<WaveComponent> jonswap_components(double hs, double tp, double gamma_s,
                                              int n, double f_start, double f_stop,
                                              double depth, double g,
                                              std::uint64_t seed);

// Passive absorption zone at the far end of the tank: fluid velocities are
// scaled by 1 - beta dt ((x - x_start)/(x_end - x_start))^ramp, clamped to
// [0, 1]; particles outside [x_start, x_end] are untouched.
struct DampingZoneSpec {
    double x_start = 0.0;
    double x_end = 0.0;
    double ramp = 2.0;
    double beta = 10.0; // 1/s
};

void apply_damping_zone(ParticleSystem& ps, const DampingZoneSpec& zone, double dt);

// Free-surface elevation at a gauge: fluid particles in the vertical strip
// |x - gauge_x| <= dp (and |y - gauge_y| <= dp in 3-D) are smoothed into a
// 1-D vertical indicator density; the surface is the highest level where the
// indicator crosses half its bulk value, scanned from above in dp/8 steps
// with linear interpolation. Returns elevation relative to still_level.
// Errors if the strip holds no fluid.
double gauge_elevation(const ParticleSystem& ps, double gauge_x, double gauge_y,
                       double still_level);

} // namespace wec
