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

#include "wec/sph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wec {

double hydrostatic_density(const EosSpec& eos, double g, double still_level, double z) {
    const double depth = std::max(still_level - z, 0.0);
    return eos.rho0 * std::pow(1.0 + eos.rho0 * g * depth / eos.b, 1.0 / eos.gamma);
}

double riemann_interface_pressure(double p_left, double p_right, double du,
                                  double rho_bar, double cf, double eta_lim) {
    const double lam = std::min(eta_lim * std::max(du, 0.0) / cf, 1.0);
    return 0.5 * (p_left + p_right) + 0.5 * lam * rho_bar * cf * du;
}

void SphRates::resize(std::size_t n) {
    ax.assign(n, 0.0); ay.assign(n, 0.0); az.assign(n, 0.0);
    drho.assign(n, 0.0);
    fx.assign(n, 0.0); fy.assign(n, 0.0); fz.assign(n, 0.0);
    inv_rho.resize(n); vol.resize(n); rho_dyn.resize(n);
}

void update_fluid_pressure(ParticleSystem& ps, const EosSpec& eos) {
    const std::size_t n = ps.count();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        if (ps.kind[i] == ParticleKind::Fluid) ps.p[i] = eos.pressure(ps.rho[i]);
    }
}

void shepard_boundary_update(ParticleSystem& ps, const NeighborList& nl,
                             const KernelSpec& kern, const EosSpec& eos,
                             const SphParams& par,
                             const double* acc_x, const double* acc_y,
                             const double* acc_z) {
    const std::int64_t nb = static_cast<std::int64_t>(ps.boundary_index.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t bi = 0; bi < nb; ++bi) {
        const std::uint32_t i = ps.boundary_index[bi];
        const double xi = ps.x[i], yi = ps.y[i], zi = ps.z[i];
        double sw = 0.0, sp = 0.0, sx = 0.0, sy = 0.0, sz = 0.0;
        for (const std::uint32_t* it = nl.begin(i); it != nl.end(i); ++it) {
            const std::uint32_t j = *it;
            if (ps.kind[j] != ParticleKind::Fluid) continue;
            const double rx = xi - ps.x[j];
            const double ry = yi - ps.y[j];
            const double rz = zi - ps.z[j];
            const double w = kern.value(std::sqrt(rx * rx + ry * ry + rz * rz));
            sw += w;
            sp += ps.p[j] * w;
            sx += ps.rho[j] * rx * w;
            sy += ps.rho[j] * ry * w;
            sz += ps.rho[j] * rz * w;
        }
        double pb = 0.0;
        if (sw > 0.0) {
            const double gx = (acc_x ? -acc_x[i] : 0.0);
            const double gy = (acc_y ? -acc_y[i] : 0.0);
            const double gz = -par.g - (acc_z ? acc_z[i] : 0.0);
            pb = (sp + gx * sx + gy * sy + gz * sz) / sw;
        }
        ps.p[i] = pb;
        // Walls and the piston take the EOS-consistent density (the floor on
        // the inversion only matters once a run has already blown up). Body
        // particles keep their material density so m/rho stays the lattice
        // volume in every pair sum; that is what makes the summed pressure
        // force on a floater approximate the wetted-surface integral.
        if (ps.kind[i] != ParticleKind::Body)
            ps.rho[i] = eos.density_from_pressure(std::max(pb, -0.5 * eos.b));
    }
}

void compute_rates(const ParticleSystem& ps, const NeighborList& nl,
                   const KernelSpec& kern, const EosSpec& eos,
                   const SphParams& par, SphRates& out) {
    const std::size_t n = ps.count();
    out.resize(n);

    const double* px = ps.x.data();
    const double* py = ps.y.data();
    const double* pz = ps.z.data();
    const double* pvx = ps.vx.data();
    const double* pvy = ps.vy.data();
    const double* pvz = ps.vz.data();
    const double* prho = ps.rho.data();
    const double* pp = ps.p.data();
    const double* pm = ps.m.data();
    const ParticleKind* pk = ps.kind.data();

    const double inv_cf = 1.0 / eos.cf;
    const double diff_coeff = par.delta_dd * kern.h * eos.cf;

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        out.inv_rho[i] = 1.0 / prho[i];
        out.vol[i] = pm[i] * out.inv_rho[i];
        out.rho_dyn[i] =
            prho[i] - hydrostatic_density(eos, par.g, par.still_level, pz[i]);
    }

#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const ParticleKind ki = pk[i];
        if (ki == ParticleKind::Wall || ki == ParticleKind::Piston) continue;
        const bool fluid_i = (ki == ParticleKind::Fluid);

        const double xi = px[i], yi = py[i], zi = pz[i];
        const double vxi = pvx[i], vyi = pvy[i], vzi = pvz[i];
        const double rho_i = prho[i], p_i = pp[i];
        const double inv_rho_i = out.inv_rho[i];
        const double dyn_i = out.rho_dyn[i];

        double accx = 0.0, accy = 0.0, accz = 0.0;
        double cont = 0.0, zeta = 0.0;

        for (const std::uint32_t* it = nl.begin(i); it != nl.end(i); ++it) {
            const std::uint32_t j = *it;
            if (!fluid_i && pk[j] != ParticleKind::Fluid) continue;

            const double rx = xi - px[j];
            const double ry = yi - py[j];
            const double rz = zi - pz[j];
            const double r2 = rx * rx + ry * ry + rz * rz;
            const double inv_r = 1.0 / std::sqrt(r2);
            const double r = r2 * inv_r;
            const double s = kern.grad_scale(r); // gradW = r_ij * s

            const double udotr =
                (vxi - pvx[j]) * rx + (vyi - pvy[j]) * ry + (vzi - pvz[j]) * rz;

            // Riemann states along e = r_ij / r: left = j, right = i
            const double du = -udotr * inv_r;
            const double lam = std::min(par.eta_lim * std::max(du, 0.0) * inv_cf, 1.0);
            const double rho_bar = 0.5 * (rho_i + prho[j]);
            const double pstar =
                0.5 * (pp[j] + p_i) + 0.5 * lam * rho_bar * eos.cf * du;

            const double coeff = -2.0 * pm[j] * pstar * inv_rho_i * out.inv_rho[j] * s;
            accx += coeff * rx;
            accy += coeff * ry;
            accz += coeff * rz;

            if (fluid_i) {
                cont += out.vol[j] * s * udotr;
                if (pk[j] == ParticleKind::Fluid)
                    zeta += out.vol[j] * (-2.0) * (out.rho_dyn[j] - dyn_i) * s;
            }
        }

        if (fluid_i) {
            out.ax[i] = accx;
            out.ay[i] = accy;
            out.az[i] = accz - par.g;
            out.drho[i] = rho_i * cont + diff_coeff * zeta;
        } else { // body particle: fluid pressure force only
            out.fx[i] = pm[i] * accx;
            out.fy[i] = pm[i] * accy;
            out.fz[i] = pm[i] * accz;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        bool ok = true;
        if (pk[i] == ParticleKind::Fluid)
            ok = std::isfinite(out.ax[i]) && std::isfinite(out.ay[i]) &&
                 std::isfinite(out.az[i]) && std::isfinite(out.drho[i]);
        else if (pk[i] == ParticleKind::Body)
            ok = std::isfinite(out.fx[i]) && std::isfinite(out.fy[i]) &&
                 std::isfinite(out.fz[i]);
        if (!ok)
            fail(ErrorCode::Numeric,
                 "non-finite rate at particle " + std::to_string(i));
    }
}

} // namespace wec
