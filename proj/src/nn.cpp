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

#include "wec/nn.hpp"

#include <cmath>

#include "wec/error.hpp"

namespace wec {

Mlp::Mlp(std::vector<int> sizes, Rng& rng, double head_scale)
    : sizes_(std::move(sizes)) {
    require(sizes_.size() >= 2, ErrorCode::InvalidArgument,
            "mlp needs at least input and output widths");
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        require(sizes_[l] > 0 && sizes_[l + 1] > 0, ErrorCode::InvalidArgument,
                "mlp layer widths must be positive");
        n += std::size_t(sizes_[l + 1]) * std::size_t(sizes_[l]) + sizes_[l + 1];
    }
    params_.resize(n);
    std::size_t at = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const double bound = 1.0 / std::sqrt(double(sizes_[l]));
        const double scale = (l + 2 == sizes_.size()) ? head_scale : 1.0;
        const std::size_t count =
            std::size_t(sizes_[l + 1]) * std::size_t(sizes_[l]) + sizes_[l + 1];
        for (std::size_t k = 0; k < count; ++k)
            params_[at++] = scale * rng.uniform(-bound, bound);
    }
}

std::vector<double> Mlp::forward(const double* x, Tape* tape) const {
    std::vector<double> cur(x, x + sizes_.front());
    if (tape) {
        tape->a.assign(1, cur);
        tape->a.reserve(sizes_.size());
    }
    std::size_t at = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const int nin = sizes_[l], nout = sizes_[l + 1];
        std::vector<double> next(nout);
        const double* w = params_.data() + at;
        const double* b = w + std::size_t(nout) * nin;
        for (int o = 0; o < nout; ++o) {
            double s = b[o];
            const double* row = w + std::size_t(o) * nin;
            for (int i = 0; i < nin; ++i) s += row[i] * cur[i];
            next[o] = s;
        }
        if (l + 2 < sizes_.size())
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        at += std::size_t(nout) * nin + nout;
        cur = std::move(next);
        if (tape) tape->a.push_back(cur);
    }
    return cur;
}

void Mlp::backward(const Tape& tape, const double* dy,
                   std::vector<double>& grad, double* dx) const {
    require(tape.a.size() == sizes_.size(), ErrorCode::InvalidArgument,
            "tape does not match network depth");
    require(grad.size() == params_.size(), ErrorCode::InvalidArgument,
            "gradient buffer size mismatch");

    std::vector<double> delta(dy, dy + sizes_.back());
    // offsets of each layer's weight block
    std::vector<std::size_t> off(sizes_.size() - 1);
    std::size_t at = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        off[l] = at;
        at += std::size_t(sizes_[l + 1]) * sizes_[l] + sizes_[l + 1];
    }

    for (std::size_t l = sizes_.size() - 1; l-- > 0;) {
        const int nin = sizes_[l], nout = sizes_[l + 1];
        const double* w = params_.data() + off[l];
        double* gw = grad.data() + off[l];
        double* gb = gw + std::size_t(nout) * nin;
        const std::vector<double>& ain = tape.a[l];

        for (int o = 0; o < nout; ++o) {
            const double d = delta[o];
            gb[o] += d;
            double* grow = gw + std::size_t(o) * nin;
            for (int i = 0; i < nin; ++i) grow[i] += d * ain[i];
        }
        if (l > 0 || dx) {
            std::vector<double> prev(nin, 0.0);
            for (int o = 0; o < nout; ++o) {
                const double d = delta[o];
                const double* row = w + std::size_t(o) * nin;
                for (int i = 0; i < nin; ++i) prev[i] += d * row[i];
            }
            if (l > 0) {
                // ReLU gate: post-activation is zero exactly where clamped
                for (int i = 0; i < nin; ++i)
                    if (tape.a[l][i] <= 0.0) prev[i] = 0.0;
            }
            if (l == 0) {
                for (int i = 0; i < nin; ++i) dx[i] = prev[i];
                break;
            }
            delta = std::move(prev);
        }
    }
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, double lr, double beta1, double beta2,
               double eps) {
    require(params.size() == grads.size() && params.size() == state.m.size(),
            ErrorCode::InvalidArgument, "adam buffer size mismatch");
    for (double g : grads)
        require(std::isfinite(g), ErrorCode::Numeric,
                "non-finite gradient in adam step");
    state.t += 1;
    const double c1 = 1.0 - std::pow(beta1, double(state.t));
    const double c2 = 1.0 - std::pow(beta2, double(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grads[i];
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / c1;
        const double vhat = state.v[i] / c2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

void soft_update(std::vector<double>& target, const std::vector<double>& online,
                 double tau) {
    require(target.size() == online.size(), ErrorCode::InvalidArgument,
            "soft update size mismatch");
    for (std::size_t i = 0; i < target.size(); ++i)
        target[i] = tau * online[i] + (1.0 - tau) * target[i];
}

} // namespace wec
