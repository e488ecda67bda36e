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

#include "wec/waves.hpp"

#include <algorithm>
#include <cmath>

#include "wec/error.hpp"
#include "wec/util.hpp"

namespace wec {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

double solve_dispersion(double t_wave, double depth, double g) {
    require(t_wave > 0.0 && depth > 0.0 && g > 0.0, ErrorCode::InvalidArgument,
            "dispersion: period, depth and g must be positive");
    const double w2 = kTwoPi / t_wave * (kTwoPi / t_wave);
    auto f = [&](double k) { return w2 - g * k * std::tanh(k * depth); };
    double lo = 1e-6, hi = 1e3;
    double flo = f(lo), fhi = f(hi);
    require(flo * fhi < 0.0, ErrorCode::Numeric, "dispersion: no sign change in bracket");
    double mid = lo, fmid = flo;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        fmid = f(mid);
        if (std::abs(fmid) < 1e-10) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    require(std::abs(fmid) < 1e-10, ErrorCode::Numeric, "dispersion: bisection stalled");
    return mid;
}

double regular_stroke(double h_wave, double t_wave, double depth, double g) {
    require(h_wave > 0.0, ErrorCode::InvalidArgument, "stroke: wave height must be positive");
    const double kd = solve_dispersion(t_wave, depth, g) * depth;
    const double sh = std::sinh(kd);
    return h_wave * (sh * std::cosh(kd) + kd) / (2.0 * sh * sh);
}

WaveMakerSpec make_regular_wavemaker(double h_wave, double t_wave, double theta,
                                     double depth, double g) {
    WaveMakerSpec spec;
    spec.regular = true;
    spec.depth = depth;
    spec.h_wave = h_wave;
    spec.t_wave = t_wave;
    spec.ramp_period = t_wave;
    WaveComponent c;
    c.s0 = regular_stroke(h_wave, t_wave, depth, g);
    c.omega = kTwoPi / t_wave;
    c.theta = theta;
    spec.components.push_back(c);
    return spec;
}

WaveMakerSpec make_irregular_wavemaker(std::vector<WaveComponent> components,
                                       double depth, double ramp_period) {
    require(!components.empty(), ErrorCode::InvalidArgument,
            "wavemaker: at least one spectral component required");
    for (const auto& c : components)
        require(c.s0 >= 0.0 && c.omega > 0.0 && c.theta >= 0.0 && c.theta < kTwoPi,
                ErrorCode::InvalidArgument, "wavemaker: invalid spectral component");
    WaveMakerSpec spec;
    spec.regular = false;
    spec.depth = depth;
    spec.ramp_period = ramp_period;
    spec.components = std::move(components);
    return spec;
}

double piston_displacement(const WaveMakerSpec& spec, double t) {
    double x = 0.0;
    for (const auto& c : spec.components)
        x += 0.5 * c.s0 * std::sin(c.omega * t + c.theta);
    return x;
}

double piston_velocity(const WaveMakerSpec& spec, double t) {
    double v = 0.0;
    for (const auto& c : spec.components)
        v += 0.5 * c.s0 * c.omega * std::cos(c.omega * t + c.theta);
    return v;
}

double piston_acceleration(const WaveMakerSpec& spec, double t) {
    double a = 0.0;
    for (const auto& c : spec.components)
        a -= 0.5 * c.s0 * c.omega * c.omega * std::sin(c.omega * t + c.theta);
    return a;
}

PistonState ramped_piston_state(const WaveMakerSpec& spec, double t) {
    const double xu = piston_displacement(spec, t);
    const double vu = piston_velocity(spec, t);
    const double au = piston_acceleration(spec, t);
    PistonState st;
    if (spec.ramp_period > 0.0 && t < spec.ramp_period) {
        const double r = t / spec.ramp_period;
        const double dr = 1.0 / spec.ramp_period;
        st.x = r * xu;
        st.v = dr * xu + r * vu;
        st.a = 2.0 * dr * vu + r * au;
    } else {
        st.x = xu;
        st.v = vu;
        st.a = au;
    }
    return st;
}

std::vector<WaveComponent> jonswap_components(double hs, double tp, double gamma_s,
                                              int n, double f_start, double f_stop,
                                              double depth, double g,
                                              std::uint64_t seed) {
    require(hs > 0.0 && tp > 0.0 && gamma_s >= 1.0, ErrorCode::InvalidArgument,
            "jonswap: invalid Hs/Tp/gamma");
    require(n >= 1, ErrorCode::InvalidArgument, "jonswap: need at least one component");
    require(f_start > 0.0 && f_start < f_stop, ErrorCode::InvalidArgument,
            "jonswap: invalid frequency band");

    const double fp = 1.0 / tp;
    const double df = (f_stop - f_start) / n;
    auto s_raw = [&](double f) {
        const double sigma = (f <= fp) ? 0.07 : 0.09;
        const double dfp = (f - fp) / (sigma * fp);
        const double r = std::exp(-0.5 * dfp * dfp);
        const double f4 = std::pow(fp / f, 4.0);
        return g * g / std::pow(kTwoPi, 4.0) * std::pow(f, -5.0) *
               std::exp(-1.25 * f4) * std::pow(gamma_s, r);
    };

    std::vector<double> freq(n), sval(n);
    double m0 = 0.0;
    for (int i = 0; i < n; ++i) {
        freq[i] = f_start + (i + 0.5) * df;
        sval[i] = s_raw(freq[i]);
        m0 += sval[i] * df;
    }
    require(m0 > 0.0, ErrorCode::Numeric, "jonswap: degenerate spectrum");
    // rescale so 4 sqrt(sum S df) reproduces Hs exactly on this discretisation
    const double scale = (hs / 4.0) * (hs / 4.0) / m0;

    Rng rng(seed);
    std::vector<WaveComponent> out(n);
    for (int i = 0; i < n; ++i) {
        const double hi = 2.0 * std::sqrt(2.0 * sval[i] * scale * df);
        WaveComponent& c = out[i];
        c.omega = kTwoPi * freq[i];
        c.s0 = regular_stroke(std::max(hi, 1e-300), 1.0 / freq[i], depth, g);
        c.theta = rng.uniform(0.0, kTwoPi);
    }
    return out;
}

void apply_damping_zone(ParticleSystem& ps, const DampingZoneSpec& zone, double dt) {
    require(zone.x_start < zone.x_end, ErrorCode::InvalidArgument,
            "damping zone: empty extent");
    const double inv_len = 1.0 / (zone.x_end - zone.x_start);
    const std::size_t n = ps.count();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        if (ps.kind[i] != ParticleKind::Fluid) continue;
        const double x = ps.x[i];
        if (x < zone.x_start || x > zone.x_end) continue;
        const double s = (x - zone.x_start) * inv_len;
        double f = 1.0 - zone.beta * dt * std::pow(s, zone.ramp);
        f = std::clamp(f, 0.0, 1.0);
        ps.vx[i] *= f;
        ps.vy[i] *= f;
        ps.vz[i] *= f;
    }
}

namespace {

// 1-D Wendland C2 with unit integral: support 2 sigma, alpha = 3/(4 sigma)
inline double smooth1d(double dz, double sigma) {
    const double q = std::abs(dz) / sigma;
    if (q >= 2.0) return 0.0;
    const double t = 1.0 - 0.5 * q;
    const double t2 = t * t;
    return 0.75 / sigma * t2 * t2 * (1.0 + 2.0 * q);
}

} // namespace

double gauge_elevation(const ParticleSystem& ps, double gauge_x, double gauge_y,
                       double still_level) {
    const double dp = ps.dp;
    require(dp > 0.0, ErrorCode::InvalidArgument, "gauge: particle spacing unset");
    std::vector<double> zs;
    zs.reserve(256);
    for (std::size_t i = 0; i < ps.count(); ++i) {
        if (ps.kind[i] != ParticleKind::Fluid) continue;
        if (std::abs(ps.x[i] - gauge_x) > dp) continue;
        if (ps.dim == 3 && std::abs(ps.y[i] - gauge_y) > dp) continue;
        zs.push_back(ps.z[i]);
    }
    require(!zs.empty(), ErrorCode::InvalidArgument, "gauge: no fluid in strip");

    const auto [lo_it, hi_it] = std::minmax_element(zs.begin(), zs.end());
    const double z_lo = *lo_it, z_hi = *hi_it;
    const double sigma = dp;
    const double step = dp / 8.0;
    const double z_top = z_hi + 2.0 * sigma;

    const int nsamp = static_cast<int>((z_top - z_lo) / step) + 1;
    std::vector<double> level(nsamp), dens(nsamp);
    for (int s = 0; s < nsamp; ++s) {
        const double z = z_top - s * step; // scan downward
        double d = 0.0;
        for (double zk : zs) d += smooth1d(z - zk, sigma);
        level[s] = z;
        dens[s] = d;
    }

    // bulk reference: median over samples well below the top
    std::vector<double> interior;
    for (int s = 0; s < nsamp; ++s)
        if (level[s] <= z_hi - 2.0 * sigma) interior.push_back(dens[s]);
    double ref;
    if (interior.empty()) {
        ref = *std::max_element(dens.begin(), dens.end());
    } else {
        const std::size_t mid = interior.size() / 2;
        std::nth_element(interior.begin(), interior.begin() + mid, interior.end());
        ref = interior[mid];
    }
    require(ref > 0.0, ErrorCode::Numeric, "gauge: degenerate column density");
    const double thr = 0.5 * ref;

    // highest downward crossing of the threshold
    for (int s = 1; s < nsamp; ++s) {
        if (dens[s] >= thr && dens[s - 1] < thr) {
            const double frac = (thr - dens[s - 1]) / (dens[s] - dens[s - 1]);
            return level[s - 1] + frac * (level[s] - level[s - 1]) - still_level;
        }
    }
    return z_hi - still_level; // column denser than threshold everywhere
}

} // namespace wec
