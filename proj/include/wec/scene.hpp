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

#include "wec/body.hpp"
#include "wec/kernel.hpp"
#include "wec/particles.hpp"
#include "wec/sph.hpp"
#include "wec/waves.hpp"

namespace wec {

enum class WaveKind : std::uint8_t { None = 0, Regular = 1, Irregular = 2 };

struct BodySpec {
    double xc = 6.0;        // centre x
    double yc = 0.0;        // centre y (3-D)
    double width = 0.5;     // horizontal size d_c (diameter in 3-D)
    double height = 0.22;   // vertical size h_c
    double draft = 0.112;   // submerged depth at rest
    double kp = 700.0;      // initial PTO damping
    BodyDof dof = BodyDof::HeaveOnly;
    double mass = -1.0;     // <= 0: rho0 * displaced volume at the given draft
};

struct SceneSpec {
    int dim = 2;
    double dp = 0.02;
    double length = 12.0;   // tank extent along the wave direction
    double breadth = 0.0;   // tank extent in y (3-D only)
    double depth = 1.1;     // still-water depth
    double freeboard = 0.5; // wall/piston extension above the still level
    double g = 9.81;

    double rho0 = 1000.0;
    double cf = 0.0;        // <= 0: 10 sqrt(g depth), floored at 10 m/s
    double delta_dd = 0.1;
    double eta_lim = 3.0;

    WaveKind wave_kind = WaveKind::Regular;
    double wave_height = 0.16;
    double wave_period = 1.5;
    double wave_theta = 0.0;
    double hs = 0.16;       // irregular sea
    double tp = 1.5;
    int n_components = 50;
    double gamma_s = 3.3;
    std::uint64_t wave_seed = 1;

    bool damping_zone = true;
    double damping_length = 0.0; // <= 0: one wavelength at the (peak) period

    std::vector<BodySpec> bodies;
};

// Everything the integrator owns: particles plus the static scene agreements.
struct Scene {
    ParticleSystem ps;
    std::vector<FloatingBody> bodies;
    WaveMakerSpec wavemaker;     // empty components if wave_kind == None
    bool has_wavemaker = false;
    DampingZoneSpec damping;
    bool damping_on = false;
    KernelSpec kernel;
    EosSpec eos;
    SphParams sph;
    double still_level = 0.0;
    double tank_length = 0.0;

    std::vector<std::uint32_t> piston_particles;
    std::vector<double> piston_off_x; // offsets from the moving face
};

// Build the initial particle layout: fluid lattice at spacing dp, 4 dummy
// layers for floor, downstream wall and piston, solid-filled floaters on
// their own lattice anchored at z = depth - draft, with the fluid carved out
// of each floater footprint. Fluid particles come first in index order.
Scene build_scene(const SceneSpec& spec);

} // namespace wec
