#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "wec/kernel.hpp"
#include "wec/neighbors.hpp"
#include "wec/particles.hpp"
#include "wec/sph.hpp"
#include "wec/util.hpp"

using namespace wec;

namespace {

// independently frozen high-precision constants (30-digit scalar evaluation)
constexpr double kPartition2d = 1.00120579634023872;
constexpr double kPartition3d = 1.00054861640454168;
constexpr double kEosP1010 = 16488.0804816022857;
constexpr double kPairDrho = 734.381939559770959; // dp=0.1 h=0.2 2-D closing u=1
constexpr double kRhoBottom11 = 1006.61177357092175; // depth 1.1 m, g=9.81
constexpr double kW0_2d = 13.9260575205408419;    // h = 0.2
constexpr double kWh_2d = 2.61113578510140785;    // h = 0.2, r = h
constexpr double kW0_3d = 52.2227157020281570;    // h = 0.2

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ParticleSystem lattice2d(int nx, int nz, double dp, double rho = 1000.0) {
    ParticleSystem ps;
    ps.dim = 2;
    ps.dp = dp;
    const double m = rho * dp * dp;
    for (int k = 0; k < nz; ++k)
        for (int i = 0; i < nx; ++i)
            ps.add(i * dp, 0.0, k * dp, m, rho, ParticleKind::Fluid);
    ps.fluid_count = ps.count();
    return ps;
}

} // namespace

TEST_CASE("kernel values and compact support") {
    KernelSpec k2(2, 0.2);
    CHECK(rel_err(k2.value(0.0), kW0_2d) < 1e-13);
    CHECK(rel_err(k2.value(0.2), kWh_2d) < 1e-13);
    CHECK(k2.value(0.4) == 0.0);
    CHECK(k2.value(0.5) == 0.0);
    CHECK(k2.grad_scale(0.4) == 0.0);
    CHECK(std::isfinite(k2.grad_scale(0.0)));

    KernelSpec k3(3, 0.2);
    CHECK(rel_err(k3.value(0.0), kW0_3d) < 1e-13);

    CHECK_THROWS_AS(KernelSpec(4, 0.1), Error);
    CHECK_THROWS_AS(KernelSpec(2, 0.0), Error);
}

TEST_CASE("kernel gradient is antisymmetric and vanishes at the origin") {
    KernelSpec k(2, 0.2);
    const double rx = 0.07, rz = -0.11;
    const double r = std::sqrt(rx * rx + rz * rz);
    const double s = k.grad_scale(r);
    // gradW(r_ij) = r_ij * s, so flipping r_ij flips the vector exactly
    CHECK(rx * s == -(-rx) * s);
    CHECK(k.grad_scale(0.0) * 0.0 == 0.0);
}

TEST_CASE("kernel partition of unity on interior lattice points") {
    for (double dp : {1.0, 0.013}) {
        const KernelSpec k2(2, 2.0 * dp);
        double s2 = 0.0;
        for (int i = -5; i <= 5; ++i)
            for (int kz = -5; kz <= 5; ++kz)
                s2 += k2.value(std::sqrt(double(i * i + kz * kz)) * dp) * dp * dp;
        CHECK(rel_err(s2, kPartition2d) < 1e-12);
        CHECK(s2 > 0.99);
        CHECK(s2 < 1.01);

        const KernelSpec k3(3, 2.0 * dp);
        double s3 = 0.0;
        for (int i = -5; i <= 5; ++i)
            for (int j = -5; j <= 5; ++j)
                for (int kz = -5; kz <= 5; ++kz)
                    s3 += k3.value(std::sqrt(double(i * i + j * j + kz * kz)) * dp) * dp * dp * dp;
        CHECK(rel_err(s3, kPartition3d) < 1e-12);
        CHECK(s3 > 0.99);
        CHECK(s3 < 1.01);
    }
}

TEST_CASE("equation of state: reference point, frozen value, monotonicity, inverse") {
    EosSpec eos; // rho0 1000, cf 40, gamma 7
    CHECK(eos.pressure(1000.0) == 0.0);
    CHECK(rel_err(eos.pressure(1010.0), kEosP1010) < 1e-13);

    Rng rng(42);
    for (int t = 0; t < 100; ++t) {
        const double a = rng.uniform(900.0, 1100.0);
        const double b = rng.uniform(900.0, 1100.0);
        if (a < b) CHECK(eos.pressure(a) < eos.pressure(b));
        if (a > b) CHECK(eos.pressure(a) > eos.pressure(b));
    }
    for (int t = 0; t < 50; ++t) {
        const double rho = rng.uniform(950.0, 1100.0);
        CHECK(rel_err(eos.density_from_pressure(eos.pressure(rho)), rho) < 1e-10);
    }
    CHECK_THROWS_AS(eos.pressure(0.0), Error);
    CHECK_THROWS_AS(eos.pressure(-1.0), Error);
}

TEST_CASE("neighbour lists: pair inside and outside support") {
    const double h = 0.1;
    for (double f : {1.9, 2.1}) {
        ParticleSystem ps;
        ps.dim = 2;
        ps.dp = 0.05;
        ps.add(0.0, 0.0, 0.0, 1.0, 1000.0, ParticleKind::Fluid);
        ps.add(f * h, 0.0, 0.0, 1.0, 1000.0, ParticleKind::Fluid);
        ps.fluid_count = 2;
        NeighborList nl;
        nl.build(ps, 2.0 * h);
        if (f < 2.0) {
            REQUIRE(nl.degree(0) == 1);
            REQUIRE(nl.degree(1) == 1);
            CHECK(*nl.begin(0) == 1);
            CHECK(*nl.begin(1) == 0);
        } else {
            CHECK(nl.degree(0) == 0);
            CHECK(nl.degree(1) == 0);
        }
    }
}

TEST_CASE("neighbour lists match brute force and are sorted") {
    const double dp = 0.02;
    ParticleSystem ps = lattice2d(10, 10, dp);
    // jitter a few positions so the grid is exercised off-lattice
    Rng rng(7);
    for (std::size_t i = 0; i < ps.count(); ++i) {
        ps.x[i] += rng.uniform(-0.3, 0.3) * dp;
        ps.z[i] += rng.uniform(-0.3, 0.3) * dp;
    }
    const double support = 4.0 * dp; // h = 2 dp
    NeighborList nl;
    nl.build(ps, support);

    const std::size_t n = ps.count();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> brute;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dx = ps.x[i] - ps.x[j];
            const double dz = ps.z[i] - ps.z[j];
            if (dx * dx + dz * dz < support * support)
                brute.push_back(static_cast<std::uint32_t>(j));
        }
        REQUIRE(nl.degree(i) == brute.size());
        const std::uint32_t* row = nl.begin(i);
        for (std::size_t t = 0; t < brute.size(); ++t) CHECK(row[t] == brute[t]);
        for (std::size_t t = 1; t < nl.degree(i); ++t) CHECK(row[t - 1] < row[t]);
    }

    NeighborList nl2;
    nl2.build(ps, support);
    REQUIRE(nl2.pair_entries() == nl.pair_entries());
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(nl2.degree(i) == nl.degree(i));
        for (std::size_t t = 0; t < nl.degree(i); ++t)
            CHECK(nl.begin(i)[t] == nl2.begin(i)[t]);
    }
}

TEST_CASE("neighbour lists in 3-D match brute force") {
    ParticleSystem ps;
    ps.dim = 3;
    ps.dp = 0.1;
    Rng rng(11);
    for (int i = 0; i < 200; ++i)
        ps.add(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0),
               1.0, 1000.0, ParticleKind::Fluid);
    ps.fluid_count = ps.count();
    const double support = 0.25;
    NeighborList nl;
    nl.build(ps, support);
    for (std::size_t i = 0; i < ps.count(); ++i) {
        std::vector<std::uint32_t> brute;
        for (std::size_t j = 0; j < ps.count(); ++j) {
            if (i == j) continue;
            const double dx = ps.x[i] - ps.x[j];
            const double dy = ps.y[i] - ps.y[j];
            const double dz = ps.z[i] - ps.z[j];
            if (dx * dx + dy * dy + dz * dz < support * support)
                brute.push_back(static_cast<std::uint32_t>(j));
        }
        REQUIRE(nl.degree(i) == brute.size());
        for (std::size_t t = 0; t < brute.size(); ++t) CHECK(nl.begin(i)[t] == brute[t]);
    }
}

TEST_CASE("interface pressure: zero jump, rarefaction clamp, frozen compression value") {
    CHECK(riemann_interface_pressure(300.0, 300.0, 0.0, 1000.0, 40.0, 3.0) == 300.0);
    // separating states: limiter clamps the dissipation term to zero
    CHECK(riemann_interface_pressure(100.0, 200.0, -0.7, 1000.0, 40.0, 3.0) == 150.0);
    const double ps = riemann_interface_pressure(100.0, 200.0, 0.5, 1000.0, 40.0, 3.0);
    CHECK(rel_err(ps, 525.0) < 1e-14);
}

TEST_CASE("hydrostatic density profile is EOS-consistent") {
    EosSpec eos;
    const double g = 9.81, zs = 1.1;
    CHECK(hydrostatic_density(eos, g, zs, 1.1) == 1000.0);
    CHECK(hydrostatic_density(eos, g, zs, 2.0) == 1000.0); // above the surface
    CHECK(rel_err(hydrostatic_density(eos, g, zs, 0.0), kRhoBottom11) < 1e-13);
    for (double z : {0.0, 0.3, 0.7, 1.05}) {
        const double rho = hydrostatic_density(eos, g, zs, z);
        CHECK(rel_err(eos.pressure(rho), 1000.0 * g * (zs - z)) < 1e-12);
    }
}

TEST_CASE("rates: isolated particle feels only gravity") {
    ParticleSystem ps;
    ps.dim = 2;
    ps.dp = 0.1;
    ps.add(0.0, 0.0, 0.0, 10.0, 1000.0, ParticleKind::Fluid);
    ps.fluid_count = 1;
    NeighborList nl;
    nl.build(ps, 0.4);
    KernelSpec kern(2, 0.2);
    EosSpec eos;
    SphParams par;
    SphRates rates;
    update_fluid_pressure(ps, eos);
    compute_rates(ps, nl, kern, eos, par, rates);
    CHECK(rates.ax[0] == 0.0);
    CHECK(rates.az[0] == -par.g);
    CHECK(rates.drho[0] == 0.0);
}

TEST_CASE("rates: pair pressure forces are equal and opposite") {
    ParticleSystem ps;
    ps.dim = 2;
    ps.dp = 0.1;
    ps.add(0.0, 0.0, 0.0, 10.0, 1005.0, ParticleKind::Fluid);
    ps.add(0.07, 0.0, 0.08, 12.0, 998.0, ParticleKind::Fluid);
    ps.fluid_count = 2;
    ps.vx[0] = 0.1; ps.vz[0] = -0.05;
    ps.vx[1] = -0.2; ps.vz[1] = 0.3;
    NeighborList nl;
    nl.build(ps, 0.4);
    KernelSpec kern(2, 0.2);
    EosSpec eos;
    SphParams par;
    par.g = 0.0;
    SphRates rates;
    update_fluid_pressure(ps, eos);
    compute_rates(ps, nl, kern, eos, par, rates);
    CHECK(std::abs(ps.m[0] * rates.ax[0] + ps.m[1] * rates.ax[1]) < 1e-10);
    CHECK(std::abs(ps.m[0] * rates.az[0] + ps.m[1] * rates.az[1]) < 1e-10);
}

TEST_CASE("rates: rigid translation of a uniform field gives exactly zero density rate") {
    ParticleSystem ps = lattice2d(8, 8, 0.1);
    for (std::size_t i = 0; i < ps.count(); ++i) {
        ps.vx[i] = 0.37;
        ps.vz[i] = -0.21;
    }
    NeighborList nl;
    nl.build(ps, 0.4);
    KernelSpec kern(2, 0.2);
    EosSpec eos;
    SphParams par;
    par.g = 0.0; // hydrostatic reference degenerates to rho0, so rho_dyn = 0
    SphRates rates;
    update_fluid_pressure(ps, eos);
    compute_rates(ps, nl, kern, eos, par, rates);
    for (std::size_t i = 0; i < ps.count(); ++i) CHECK(rates.drho[i] == 0.0);
}

TEST_CASE("rates: EOS-consistent hydrostatic profile has zero diffusion at rest") {
    ParticleSystem ps = lattice2d(8, 12, 0.05);
    EosSpec eos;
    SphParams par;
    par.still_level = 11 * 0.05;
    for (std::size_t i = 0; i < ps.count(); ++i) {
        ps.rho[i] = hydrostatic_density(eos, par.g, par.still_level, ps.z[i]);
        ps.m[i] = 1000.0 * 0.05 * 0.05;
    }
    NeighborList nl;
    nl.build(ps, 0.2);
    KernelSpec kern(2, 0.1);
    SphRates rates;
    update_fluid_pressure(ps, eos);
    compute_rates(ps, nl, kern, eos, par, rates);
    for (std::size_t i = 0; i < ps.count(); ++i) CHECK(rates.drho[i] == 0.0);
}

TEST_CASE("rates: 1-D compression pair matches hand-evaluated rate") {
    ParticleSystem ps;
    ps.dim = 2;
    ps.dp = 0.1;
    ps.add(0.0, 0.0, 0.0, 10.0, 1000.0, ParticleKind::Fluid);
    ps.add(0.1, 0.0, 0.0, 10.0, 1000.0, ParticleKind::Fluid);
    ps.fluid_count = 2;
    ps.vx[0] = 0.5;
    ps.vx[1] = -0.5; // closing speed 1
    NeighborList nl;
    nl.build(ps, 0.4);
    KernelSpec kern(2, 0.2);
    EosSpec eos;
    SphParams par;
    par.g = 0.0;
    SphRates rates;
    update_fluid_pressure(ps, eos);
    compute_rates(ps, nl, kern, eos, par, rates);
    CHECK(rates.drho[0] > 0.0);
    CHECK(rates.drho[1] > 0.0);
    CHECK(rel_err(rates.drho[0], kPairDrho) < 1e-13);
    CHECK(rel_err(rates.drho[1], kPairDrho) < 1e-13);
}

TEST_CASE("rates: with no velocity jump the form reduces to symmetric pressure SPH") {
    ParticleSystem ps = lattice2d(6, 6, 0.1);
    Rng rng(3);
    for (std::size_t i = 0; i < ps.count(); ++i) {
        ps.x[i] += rng.uniform(-0.02, 0.02);
        ps.z[i] += rng.uniform(-0.02, 0.02);
        ps.rho[i] = rng.uniform(995.0, 1012.0);
        ps.vx[i] = 0.4; // identical velocities: du = 0 for every pair
        ps.vz[i] = -0.1;
    }
    NeighborList nl;
    nl.build(ps, 0.4);
    KernelSpec kern(2, 0.2);
    EosSpec eos;
    SphParams par;
    par.g = 0.0;
    SphRates rates;
    update_fluid_pressure(ps, eos);
    compute_rates(ps, nl, kern, eos, par, rates);

    const std::size_t n = ps.count();
    for (std::size_t i = 0; i < n; ++i) {
        double ox = 0.0, oz = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double rx = ps.x[i] - ps.x[j];
            const double rz = ps.z[i] - ps.z[j];
            const double r = std::sqrt(rx * rx + rz * rz);
            if (r >= 0.4) continue;
            const double s = kern.grad_scale(r);
            const double c = -ps.m[j] * (ps.p[i] + ps.p[j]) / (ps.rho[i] * ps.rho[j]) * s;
            ox += c * rx;
            oz += c * rz;
        }
        CHECK(std::abs(rates.ax[i] - ox) <= 1e-12 * std::max(1.0, std::abs(ox)));
        CHECK(std::abs(rates.az[i] - oz) <= 1e-12 * std::max(1.0, std::abs(oz)));
    }
}

TEST_CASE("rates: non-finite input aborts naming a particle") {
    ParticleSystem ps = lattice2d(4, 4, 0.1);
    ps.vx[5] = std::numeric_limits<double>::quiet_NaN();
    NeighborList nl;
    nl.build(ps, 0.4);
    KernelSpec kern(2, 0.2);
    EosSpec eos;
    SphParams par;
    SphRates rates;
    update_fluid_pressure(ps, eos);
    bool threw = false;
    try {
        compute_rates(ps, nl, kern, eos, par, rates);
    } catch (const Error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("particle") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("boundary pressure extrapolation: single pair identity") {
    // one fluid particle above one wall particle: the Shepard ratio collapses
    // to p_b = p_f + g rho_f dz, independent of the kernel value
    ParticleSystem ps;
    ps.dim = 2;
    ps.dp = 0.05;
    ps.add(0.0, 0.0, 0.05, 2.5, 1000.0, ParticleKind::Fluid);
    ps.add(0.0, 0.0, 0.0, 2.5, 1000.0, ParticleKind::Wall);
    ps.fluid_count = 1;
    ps.boundary_index = {1};
    ps.p[0] = 500.0;
    NeighborList nl;
    nl.build(ps, 0.2);
    KernelSpec kern(2, 0.1);
    EosSpec eos;
    SphParams par;

    shepard_boundary_update(ps, nl, kern, eos, par, nullptr, nullptr, nullptr);
    CHECK(rel_err(ps.p[1], 500.0 + 9.81 * 1000.0 * 0.05) < 1e-12);
    CHECK(rel_err(ps.rho[1], eos.density_from_pressure(ps.p[1])) < 1e-14);

    // an upward boundary acceleration increases the apparent weight
    std::vector<double> zero(ps.count(), 0.0), accz(ps.count(), 0.0);
    accz[1] = 2.0;
    shepard_boundary_update(ps, nl, kern, eos, par, zero.data(), zero.data(), accz.data());
    CHECK(rel_err(ps.p[1], 500.0 + (9.81 + 2.0) * 1000.0 * 0.05) < 1e-12);
}

TEST_CASE("boundary pressure extrapolation: no fluid in range falls back to rest state") {
    ParticleSystem ps;
    ps.dim = 2;
    ps.dp = 0.05;
    ps.add(3.0, 0.0, 3.0, 2.5, 1000.0, ParticleKind::Fluid);
    ps.add(0.0, 0.0, 0.0, 2.5, 1234.0, ParticleKind::Wall);
    ps.fluid_count = 1;
    ps.boundary_index = {1};
    ps.p[1] = 777.0;
    NeighborList nl;
    nl.build(ps, 0.2);
    KernelSpec kern(2, 0.1);
    EosSpec eos;
    SphParams par;
    shepard_boundary_update(ps, nl, kern, eos, par, nullptr, nullptr, nullptr);
    CHECK(ps.p[1] == 0.0);
    CHECK(ps.rho[1] == 1000.0);
}
