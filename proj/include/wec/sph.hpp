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

#include <cstddef>
#include <vector>

#include "wec/kernel.hpp"
#include "wec/neighbors.hpp"
#include "wec/particles.hpp"

namespace wec {

// Physics parameters shared by the rate-evaluation passes.
struct SphParams {
    double g = 9.81;          // gravity magnitude, acting along -z
    double still_level = 0.0; // undisturbed free-surface height z_s
    double delta_dd = 0.1;    // density-diffusion coefficient
    double eta_lim = 3.0;     // Riemann dissipation limiter
};

// Hydrostatic density profile implied by the EOS under gravity: integrating
// dp/dz = -rho g with the Tait law gives
//   rho_H(z) = rho0 * (1 + rho0 g max(z_s - z, 0) / B)^(1/gamma).
double hydrostatic_density(const EosSpec& eos, double g, double still_level, double z);

// Linearised acoustic Riemann interface pressure with a one-sided limiter.
// du = uL - uR, the normal closing speed (positive when states approach):
//   p* = (pL + pR)/2 + (1/2) lambda rho_bar cf du,
//   lambda = min(eta_lim * max(du, 0) / cf, 1).
double riemann_interface_pressure(double p_left, double p_right, double du,
                                  double rho_bar, double cf, double eta_lim);

// Output of one rate evaluation. Buffers are sized to the particle count;
// only fluid rows of ax/ay/az/drho and body rows of fx/fy/fz are meaningful.
struct SphRates {
    std::vector<double> ax, ay, az; // fluid acceleration, gravity included
    std::vector<double> drho;       // fluid density rate
    std::vector<double> fx, fy, fz; // fluid pressure force on body particles

    void resize(std::size_t n);

    // scratch reused across evaluations
    std::vector<double> inv_rho, vol, rho_dyn;
};

// Fluid pressures from the EOS. Boundary pressures come from the Shepard fit.
void update_fluid_pressure(ParticleSystem& ps, const EosSpec& eos);

// Shepard-averaged boundary pressure extrapolated from fluid neighbours,
//   p_b = [sum_j p_j W_bj + (g - a_b) . sum_j rho_j (r_b - r_j) W_bj] / sum_j W_bj
// over fluid j only, with p_b = 0 and rho_b = rho0 where no fluid is in
// range. Boundary density is then the exact EOS inverse of p_b. acc_* are
// per-particle boundary accelerations (null means all static).
void shepard_boundary_update(ParticleSystem& ps, const NeighborList& nl,
                             const KernelSpec& kern, const EosSpec& eos,
                             const SphParams& par,
                             const double* acc_x, const double* acc_y,
                             const double* acc_z);

// Fused continuity + momentum sweep.
//
//   Drho_i/Dt = rho_i sum_j (u_i - u_j) . gradW_ij V_j + zeta_i
//   Du_i/Dt   = -2 sum_j m_j (p* / (rho_i rho_j)) gradW_ij + g
//
// zeta is the dynamic-density diffusion term, fluid-fluid pairs only:
//   zeta_i = delta_dd h cf sum_j psi_ij . gradW_ij V_j,
//   psi_ij = 2 (rho_j^dyn - rho_i^dyn) r_ji / |r_ji|^2,
// where rho^dyn subtracts the hydrostatic profile rho_H(z).
//
// Each pair's Riemann states sit on the unit vector e from j to i: the left
// state is j, the right state is i, so du = (u_j - u_i) . e.
//
// Fluid rows get acceleration and density rate; body rows get the fluid
// pressure force only (fluid neighbours, no gravity). Aborts on non-finite
// results, naming the first offending particle.
void compute_rates(const ParticleSystem& ps, const NeighborList& nl,
                   const KernelSpec& kern, const EosSpec& eos,
                   const SphParams& par, SphRates& out);

} // namespace wec
