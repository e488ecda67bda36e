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

#include "wec/util.hpp"

namespace wec {

// Dense ReLU network with identity output, parameters in one flat vector so
// the optimiser, soft updates, and checkpoints treat a net as a plain array.
// Layout per layer: weights (out x in, row major), then biases.
class Mlp {
public:
    Mlp() = default;
    // sizes = {in, hidden..., out}; weights drawn U(+-1/sqrt(fan_in)), the
    // last layer additionally scaled by head_scale (policies use 1e-2).
    Mlp(std::vector<int> sizes, Rng& rng, double head_scale = 1.0);

    int input_width() const { return sizes_.front(); }
    int output_width() const { return sizes_.back(); }
    const std::vector<int>& sizes() const { return sizes_; }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // Post-activation values per layer; tape[0] is the input copy.
    struct Tape {
        std::vector<std::vector<double>> a;
    };

    // y = net(x); records activations in tape when given one.
    std::vector<double> forward(const double* x, Tape* tape = nullptr) const;

    // Accumulates dL/dparams into grad (flat, same layout as params) given
    // dL/dy and the tape of the corresponding forward pass. When dx is not
    // null it receives dL/dx. grad must be pre-sized and is added to, so a
    // batch accumulates by repeated calls.
    void backward(const Tape& tape, const double* dy, std::vector<double>& grad,
                  double* dx = nullptr) const;

private:
    std::vector<int> sizes_;
    std::vector<double> params_;
};

// Bias-corrected Adam; moments live alongside the parameter vector they
// serve. t counts completed steps.
struct AdamState {
    std::vector<double> m, v;
    std::int64_t t = 0;

    void resize(std::size_t n) {
        m.assign(n, 0.0);
        v.assign(n, 0.0);
        t = 0;
    }
};

void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

// target <- tau*online + (1-tau)*target, elementwise.
void soft_update(std::vector<double>& target, const std::vector<double>& online,
                 double tau);

} // namespace wec
