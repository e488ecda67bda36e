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

#include <cmath>

#include "wec/error.hpp"

namespace wec {

// Quintic Wendland C2 kernel with support radius 2h.
//
//   W(q) = alpha_d (1 - q/2)^4 (1 + 2q),  q = r/h in [0, 2]
//   alpha_2D = 7/(4 pi h^2),  alpha_3D = 21/(16 pi h^3)
//
// The gradient simplifies to grad W = r_ij * G(q) with
//   G(q) = -(5 alpha_d / h^2) (1 - q/2)^3,
// finite at r = 0, so pair loops need no division by r for the gradient.
struct KernelSpec {
    int dim = 2;
    double h = 0.0;
    double support = 0.0;   // 2h
    double alpha = 0.0;     // dimensional normalisation
    double grad_coeff = 0.0; // -5 alpha / h^2

    KernelSpec() = default;
    KernelSpec(int dim_, double h_) : dim(dim_), h(h_) {
        require(dim == 2 || dim == 3, ErrorCode::InvalidArgument, "kernel dim must be 2 or 3");
        require(h > 0.0, ErrorCode::InvalidArgument, "kernel h must be positive");
        support = 2.0 * h;
        const double pi = 3.14159265358979323846;
        alpha = (dim == 2) ? 7.0 / (4.0 * pi * h * h)
                           : 21.0 / (16.0 * pi * h * h * h);
        grad_coeff = -5.0 * alpha / (h * h);
    }

    // W(r)
    double value(double r) const {
        const double q = r / h;
        if (q >= 2.0) return 0.0;
        const double t = 1.0 - 0.5 * q;
        const double t2 = t * t;
        return alpha * t2 * t2 * (1.0 + 2.0 * q);
    }

    // G(q(r)) such that grad_i W(|r_i - r_j|) = (r_i - r_j) * G
    double grad_scale(double r) const {
        const double q = r / h;
        if (q >= 2.0) return 0.0;
        const double t = 1.0 - 0.5 * q;
        return grad_coeff * t * t * t;
    }
};

// Tait equation of state for weak compressibility,
//   p = (cf^2 rho0 / gamma) [ (rho/rho0)^gamma - 1 ]
// and its exact inverse. gamma is the polytropic exponent (7 for water).
struct EosSpec {
    double rho0 = 1000.0;
    double cf = 40.0;       // numerical speed of sound
    double gamma = 7.0;
    double b = 0.0;         // stiffness cf^2 rho0 / gamma

    EosSpec() { b = cf * cf * rho0 / gamma; }
    EosSpec(double rho0_, double cf_, double gamma_ = 7.0)
        : rho0(rho0_), cf(cf_), gamma(gamma_) {
        require(rho0 > 0.0 && cf > 0.0 && gamma > 0.0, ErrorCode::InvalidArgument,
                "EOS parameters must be positive");
        b = cf * cf * rho0 / gamma;
    }

    double pressure(double rho) const {
        require(rho > 0.0, ErrorCode::Numeric, "EOS: non-positive density");
        const double ratio = rho / rho0;
        // gamma = 7 in every configuration this code ships; pow() kept for generality
        const double r2 = ratio * ratio;
        const double pow7 = (gamma == 7.0) ? r2 * r2 * r2 * ratio : std::pow(ratio, gamma);
        return b * (pow7 - 1.0);
    }

    // density such that pressure(rho) = p; valid for p > -b
    double density_from_pressure(double p) const {
        const double arg = 1.0 + p / b;
        require(arg > 0.0, ErrorCode::Numeric, "EOS inverse: pressure below -B");
        return rho0 * std::pow(arg, 1.0 / gamma);
    }
};

} // namespace wec
