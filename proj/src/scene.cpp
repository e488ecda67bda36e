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

#include "wec/scene.hpp"

#include <algorithm>
#include <cmath>

#include "wec/error.hpp"

namespace wec {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kWallLayers = 4; // dp-spaced dummy layers; 4 dp covers the 2h support

struct Lattice {
    double dp;
    // cell centres at (i + 0.5) dp; first index at or after lo, last strictly below hi
    long lo_index(double lo) const { return (long)std::ceil(lo / dp - 0.5 - 1e-9); }
    long hi_index(double hi) const { return (long)std::floor(hi / dp - 0.5 - 1e-9); }
    double at(long i) const { return ((double)i + 0.5) * dp; }
};

bool inside_any_body(const SceneSpec& spec, double x, double y, double z) {
    for (const BodySpec& b : spec.bodies) {
        const double half = 0.5 * b.width + 0.5 * spec.dp;
        const double z_keel = spec.depth - b.draft - 0.5 * spec.dp;
        if (z < z_keel) continue;
        if (spec.dim == 2) {
            if (std::abs(x - b.xc) <= half) return true;
        } else {
            const double dx = x - b.xc, dy = y - b.yc;
            if (dx * dx + dy * dy <= half * half) return true;
        }
    }
    return false;
}

void seed_density(ParticleSystem& ps, const EosSpec& eos, double g, double zs) {
    for (std::size_t i = 0; i < ps.count(); ++i) {
        if (ps.kind[i] == ParticleKind::Body) continue; // keeps material density
        ps.rho[i] = hydrostatic_density(eos, g, zs, ps.z[i]);
        ps.p[i] = eos.pressure(ps.rho[i]);
    }
}

} // namespace

Scene build_scene(const SceneSpec& spec) {
    require(spec.dim == 2 || spec.dim == 3, ErrorCode::InvalidArgument,
            "scene dim must be 2 or 3");
    require(spec.dp > 0.0, ErrorCode::InvalidArgument, "dp must be positive");
    require(spec.depth >= 6.0 * spec.dp, ErrorCode::InvalidArgument,
            "depth must be at least 6 dp");
    require(spec.length >= 10.0 * spec.dp, ErrorCode::InvalidArgument,
            "tank length too small for the layout");
    require(spec.freeboard >= (double)kWallLayers * spec.dp, ErrorCode::InvalidArgument,
            "freeboard must cover the wall layers");
    if (spec.dim == 3)
        require(spec.breadth >= 4.0 * spec.dp, ErrorCode::InvalidArgument,
                "3-D tank needs a positive breadth");

    const double dp = spec.dp;
    const Lattice lat{dp};

    Scene sc;
    sc.tank_length = spec.length;
    sc.still_level = spec.depth;

    const double cf = spec.cf > 0.0
                          ? spec.cf
                          : std::max(10.0 * std::sqrt(spec.g * spec.depth), 10.0);
    sc.eos = EosSpec(spec.rho0, cf);
    sc.kernel = KernelSpec(spec.dim, 2.0 * dp);
    sc.sph.g = spec.g;
    sc.sph.still_level = spec.depth;
    sc.sph.delta_dd = spec.delta_dd;
    sc.sph.eta_lim = spec.eta_lim;

    // wavemaker first: the piston stroke sets how far the floor must extend
    double stroke_amp = 0.0;
    if (spec.wave_kind == WaveKind::Regular) {
        sc.wavemaker = make_regular_wavemaker(spec.wave_height, spec.wave_period,
                                              spec.wave_theta, spec.depth, spec.g);
        sc.has_wavemaker = true;
    } else if (spec.wave_kind == WaveKind::Irregular) {
        require(spec.n_components > 0, ErrorCode::InvalidArgument,
                "irregular sea needs at least one component");
        auto comps = jonswap_components(spec.hs, spec.tp, spec.gamma_s,
                                        spec.n_components, 0.5 / spec.tp,
                                        3.0 / spec.tp, spec.depth, spec.g,
                                        spec.wave_seed);
        sc.wavemaker = make_irregular_wavemaker(std::move(comps), spec.depth, spec.tp);
        sc.has_wavemaker = true;
    }
    for (const WaveComponent& c : sc.wavemaker.components) stroke_amp += 0.5 * c.s0;

    if (spec.damping_zone && sc.has_wavemaker) {
        double ld = spec.damping_length;
        if (ld <= 0.0) {
            const double t_ref = sc.wavemaker.regular ? sc.wavemaker.t_wave : spec.tp;
            ld = wavelength(t_ref, spec.depth, spec.g);
        }
        require(ld < 0.8 * spec.length, ErrorCode::InvalidArgument,
                "damping zone would cover most of the tank");
        sc.damping = DampingZoneSpec{spec.length - ld, spec.length, 2.0, 10.0};
        sc.damping_on = true;
    }

    for (const BodySpec& b : spec.bodies) {
        require(b.width > 2.0 * dp && b.height > 2.0 * dp, ErrorCode::InvalidArgument,
                "body smaller than two particle spacings");
        require(b.draft > 0.0 && b.draft < b.height, ErrorCode::InvalidArgument,
                "body draft must lie within its height");
        require(spec.depth - b.draft > (double)kWallLayers * dp,
                ErrorCode::InvalidArgument, "body keel too close to the floor");
        require(b.xc - 0.5 * b.width > 2.0 * dp &&
                    b.xc + 0.5 * b.width < spec.length - 2.0 * dp,
                ErrorCode::InvalidArgument, "body outside the tank interior");
    }

    ParticleSystem& ps = sc.ps;
    ps.dim = spec.dim;
    ps.dp = dp;

    const double m_fluid =
        spec.dim == 2 ? spec.rho0 * dp * dp : spec.rho0 * dp * dp * dp;
    const bool three_d = spec.dim == 3;
    const long iy_lo = three_d ? lat.lo_index(0.0) : 0;
    const long iy_hi = three_d ? lat.hi_index(spec.breadth) : 0;

    // fluid block, carved around each floater footprint
    {
        const long ix_hi = lat.hi_index(spec.length);
        const long iz_hi = lat.hi_index(spec.depth);
        for (long ix = lat.lo_index(0.0); ix <= ix_hi; ++ix)
            for (long iy = iy_lo; iy <= iy_hi; ++iy)
                for (long iz = lat.lo_index(0.0); iz <= iz_hi; ++iz) {
                    const double x = lat.at(ix), y = three_d ? lat.at(iy) : 0.0,
                                 z = lat.at(iz);
                    if (inside_any_body(spec, x, y, z)) continue;
                    ps.add(x, y, z, m_fluid, spec.rho0, ParticleKind::Fluid);
                }
    }
    ps.fluid_count = ps.count();

    const double top = spec.depth + spec.freeboard;
    const double x_behind = -stroke_amp - (double)(kWallLayers + 1) * dp;
    const double x_beyond = spec.length + (double)kWallLayers * dp;
    const double y_lo_wall = three_d ? -(double)kWallLayers * dp : 0.0;
    const double y_hi_wall = three_d ? spec.breadth + (double)kWallLayers * dp : 0.0;

    // floor slab under everything, including the piston sweep and wall corners
    for (long ix = lat.lo_index(x_behind); ix <= lat.hi_index(x_beyond); ++ix)
        for (long iy = (three_d ? lat.lo_index(y_lo_wall) : 0);
             iy <= (three_d ? lat.hi_index(y_hi_wall) : 0); ++iy)
            for (int k = 0; k < kWallLayers; ++k)
                ps.add(lat.at(ix), three_d ? lat.at(iy) : 0.0,
                       -((double)k + 0.5) * dp, m_fluid, spec.rho0,
                       ParticleKind::Wall);

    // downstream wall
    for (int k = 0; k < kWallLayers; ++k)
        for (long iy = iy_lo; iy <= iy_hi; ++iy)
            for (long iz = lat.lo_index(0.0); iz <= lat.hi_index(top); ++iz)
                ps.add(spec.length + ((double)k + 0.5) * dp,
                       three_d ? lat.at(iy) : 0.0, lat.at(iz), m_fluid, spec.rho0,
                       ParticleKind::Wall);

    if (three_d) { // side walls along y
        for (int k = 0; k < kWallLayers; ++k)
            for (long ix = lat.lo_index(x_behind); ix <= lat.hi_index(x_beyond); ++ix)
                for (long iz = lat.lo_index(0.0); iz <= lat.hi_index(top); ++iz) {
                    const double x = lat.at(ix), z = lat.at(iz);
                    ps.add(x, -((double)k + 0.5) * dp, z, m_fluid, spec.rho0,
                           ParticleKind::Wall);
                    ps.add(x, spec.breadth + ((double)k + 0.5) * dp, z, m_fluid,
                           spec.rho0, ParticleKind::Wall);
                }
    }

    // piston column at the upstream end; a plain wall when no wavemaker runs
    {
        const ParticleKind kind =
            sc.has_wavemaker ? ParticleKind::Piston : ParticleKind::Wall;
        for (int k = 0; k < kWallLayers; ++k) {
            const double off = -((double)k + 0.5) * dp;
            for (long iy = iy_lo; iy <= iy_hi; ++iy)
                for (long iz = lat.lo_index(0.0); iz <= lat.hi_index(top); ++iz) {
                    if (kind == ParticleKind::Piston) {
                        sc.piston_particles.push_back((std::uint32_t)ps.count());
                        sc.piston_off_x.push_back(off);
                    }
                    ps.add(off, three_d ? lat.at(iy) : 0.0, lat.at(iz), m_fluid,
                           spec.rho0, kind);
                }
        }
    }

    // floaters: solid lattice fill anchored at the keel, mass from the
    // displaced volume unless overridden, COM at the geometric centre
    for (std::size_t bi = 0; bi < spec.bodies.size(); ++bi) {
        const BodySpec& b = spec.bodies[bi];
        const double z_keel = spec.depth - b.draft;
        FloatingBody body;
        body.state.dof = b.dof;
        body.state.kp = b.kp;
        body.state.r0x = b.xc;
        body.state.r0y = three_d ? b.yc : 0.0;
        body.state.r0z = z_keel + 0.5 * b.height;
        body.state.z0 = body.state.r0z;
        body.half_width = 0.5 * b.width;

        const long ncol = std::lround(b.width / dp);
        const long nrow = std::lround(b.height / dp);
        for (long c = 0; c < ncol; ++c)
            for (long cy = 0; cy < (three_d ? ncol : 1); ++cy)
                for (long r = 0; r < nrow; ++r) {
                    const double x = b.xc - 0.5 * b.width + ((double)c + 0.5) * dp;
                    const double y =
                        three_d ? b.yc - 0.5 * b.width + ((double)cy + 0.5) * dp : 0.0;
                    if (three_d) {
                        const double dx = x - b.xc, dy = y - b.yc;
                        const double rad = 0.5 * b.width - 0.49 * dp;
                        if (dx * dx + dy * dy > rad * rad) continue;
                    }
                    const double z = z_keel + ((double)r + 0.5) * dp;
                    body.particles.push_back((std::uint32_t)ps.count());
                    body.off_x.push_back(x - body.state.r0x);
                    body.off_y.push_back(y - body.state.r0y);
                    body.off_z.push_back(z - body.state.r0z);
                    ps.add(x, y, z, 0.0, spec.rho0, ParticleKind::Body,
                           (std::int32_t)bi);
                }
        require(!body.particles.empty(), ErrorCode::Internal, "empty body lattice");

        double displaced = 0.0;
        if (spec.dim == 2)
            displaced = b.width * b.draft;
        else
            displaced = kPi * 0.25 * b.width * b.width * b.draft;
        body.state.mass = b.mass > 0.0 ? b.mass : spec.rho0 * displaced;
        body.state.inertia =
            body.state.mass * (b.width * b.width + b.height * b.height) / 12.0;

        // Particle masses satisfy sum(m) = M; the density is the material
        // density m/dp^dim, so the volume m/rho seen by the pair sums matches
        // the lattice volume exactly (wall-equivalent interaction strength).
        const double m_part = body.state.mass / (double)body.particles.size();
        const double vol = spec.dim == 2 ? dp * dp : dp * dp * dp;
        for (std::uint32_t idx : body.particles) {
            ps.m[idx] = m_part;
            ps.rho[idx] = m_part / vol;
        }
        sc.bodies.push_back(std::move(body));
    }

    ps.boundary_index.clear();
    for (std::size_t i = ps.fluid_count; i < ps.count(); ++i)
        ps.boundary_index.push_back((std::uint32_t)i);

    seed_density(ps, sc.eos, spec.g, sc.still_level);
    return sc;
}

} // namespace wec
