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

#include "wec/error.hpp"

namespace wec {

enum class ParticleKind : std::uint8_t {
    Fluid  = 0,
    Wall   = 1,   // static dummy boundary
    Piston = 2,   // wavemaker dummy boundary (prescribed motion)
    Body   = 3,   // floating-body dummy boundary (integrated motion)
};

inline bool is_boundary(ParticleKind k) { return k != ParticleKind::Fluid; }

// Structure-of-arrays particle storage. The y arrays exist but stay zero in
// 2-D runs (x is the wave direction, z is up). Particle order is fixed at
// scene construction and never changes, which keeps neighbour iteration
// order, and therefore every reduction, deterministic.
struct ParticleSystem {
    int dim = 2;
    double dp = 0.0;

    std::vector<double> x, y, z;
    std::vector<double> vx, vy, vz;
    std::vector<double> rho;   // density
    std::vector<double> p;     // pressure
    std::vector<double> m;     // mass (constant after construction)
    std::vector<ParticleKind> kind;
    std::vector<std::int32_t> body; // owning body index for Body particles, else -1

    // index bookkeeping filled by the scene builder
    std::size_t fluid_count = 0;                 // fluid occupies [0, fluid_count)
    std::vector<std::uint32_t> boundary_index;   // all non-fluid indices, ascending

    std::size_t count() const { return x.size(); }

    void reserve(std::size_t n) {
        x.reserve(n); y.reserve(n); z.reserve(n);
        vx.reserve(n); vy.reserve(n); vz.reserve(n);
        rho.reserve(n); p.reserve(n); m.reserve(n);
        kind.reserve(n); body.reserve(n);
    }

    std::size_t add(double px, double py, double pz, double mass, double density,
                    ParticleKind k, std::int32_t body_id = -1) {
        x.push_back(px); y.push_back(py); z.push_back(pz);
        vx.push_back(0.0); vy.push_back(0.0); vz.push_back(0.0);
        rho.push_back(density);
        p.push_back(0.0);
        m.push_back(mass);
        kind.push_back(k);
        body.push_back(body_id);
        return count() - 1;
    }
};

} // namespace wec
