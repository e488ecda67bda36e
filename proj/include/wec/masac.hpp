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
#include <cstdint>
#include <vector>

#include "wec/nn.hpp"
#include "wec/util.hpp"

namespace wec {

struct MasacSpec {
    int n_agents = 1;
    int obs_dim = 11;
    int act_dim = 1;
    std::vector<int> hidden = {128, 128, 64};
    double gamma = 0.99;
    double tau = 0.005;
    double lr = 0.003;
    double alpha_lr = 0.003;
    double alpha_init = 0.1;
    double h_target = -1.0;
    int batch = 128;
    std::size_t replay_capacity = 100000;
    std::size_t min_fill = 1000; // transitions stored before updates begin
    // Critic-target entropy term: sum over every agent's log-prob (as
    // opposed to each agent subtracting only its own).
    bool summed_entropy = true;

    std::size_t joint_obs() const { return std::size_t(n_agents) * obs_dim; }
    std::size_t joint_act() const { return std::size_t(n_agents) * act_dim; }
};

// One joint environment step: raw (unnormalised) observations, squashed
// actions in (-1,1), per-agent rewards, next observations, terminal flag.
struct Transition {
    std::vector<double> s, a, r, s2;
    bool done = false;
};

// FIFO ring of joint transitions with uniform no-replacement batch sampling.
class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, const MasacSpec& spec);

    void push(const Transition& t);
    std::size_t size() const { return count_; }
    std::size_t capacity() const { return capacity_; }

    // k distinct uniform indices (Floyd's sampling), insertion order.
    std::vector<std::size_t> sample_indices(std::size_t k, Rng& rng) const;

    const double* s(std::size_t i) const { return s_.data() + i * sw_; }
    const double* a(std::size_t i) const { return a_.data() + i * aw_; }
    const double* r(std::size_t i) const { return r_.data() + i * nr_; }
    const double* s2(std::size_t i) const { return s2_.data() + i * sw_; }
    bool done(std::size_t i) const { return done_[i] != 0; }

private:
    std::size_t capacity_, sw_, aw_, nr_;
    std::size_t head_ = 0, count_ = 0;
    std::vector<double> s_, a_, r_, s2_;
    std::vector<std::uint8_t> done_;
};

// Per-dimension Welford accumulator; sd() falls back to 1 until two samples.
struct RunningStat {
    std::vector<double> mean, m2;
    std::int64_t n = 0;

    void resize(std::size_t d) {
        mean.assign(d, 0.0);
        m2.assign(d, 0.0);
        n = 0;
    }
    void add(const double* x) {
        n += 1;
        for (std::size_t k = 0; k < mean.size(); ++k) {
            const double d = x[k] - mean[k];
            mean[k] += d / double(n);
            m2[k] += d * (x[k] - mean[k]);
        }
    }
    double sd(std::size_t k) const {
        if (n < 2) return 1.0;
        const double v = m2[k] / double(n - 1);
        return v > 1e-16 ? std::sqrt(v) : 1.0;
    }
};

struct MasacDiag {
    bool updated = false;
    std::vector<double> critic_loss, policy_loss, alpha, mean_logpi;
    double mean_q = 0.0;
};

// Multi-agent soft actor-critic under centralised training, decentralised
// execution: per-agent tanh-Gaussian policies read the agent's own 11-value
// observation; per-agent twin critics (plus Polyak-averaged target copies)
// score the joint normalised observation and joint action; temperatures are
// log-parameterised and tuned toward a fixed entropy target. Observations
// are stored raw and normalised on use; rewards are scaled by a running
// standard deviation at insertion. Checkpoints capture parameters, Adam
// moments, temperatures, normalisers, and the RNG, but not the replay ring.
class Masac {
public:
    Masac(MasacSpec spec, std::uint64_t seed);

    const MasacSpec& spec() const { return spec_; }
    ReplayBuffer& replay() { return replay_; }
    Rng& rng() { return rng_; }
    double alpha(int agent) const { return std::exp(log_alpha_[agent]); }

    // Decentralised action for one agent from its raw observation;
    // deterministic mode returns tanh(mu) for evaluation.
    std::vector<double> act(int agent, const double* obs, bool deterministic);

    // As act(), also returning the squashed-Gaussian log-probability.
    std::pair<std::vector<double>, double>
    sample(int agent, const double* obs, bool deterministic);

    void store(const Transition& t);
    MasacDiag update();
    MasacDiag train_step(const Transition& t);

    std::vector<char> save() const;
    void load(const std::vector<char>& bytes);

    // --- pieces exposed for oracles and the acceptance gate ---

    // Soft Bellman targets for the given replay rows, row-major (row, agent).
    // Draws one joint next-action sample per row from rng().
    std::vector<double> critic_targets(const std::vector<std::size_t>& rows);

    // Critic j (0/1) of one agent: mean squared error against y over rows,
    // and optionally the flat parameter gradient. Pure: no optimiser step.
    double critic_loss_eval(int agent, int j,
                            const std::vector<std::size_t>& rows,
                            const std::vector<double>& y,
                            std::vector<double>* grad = nullptr) const;

    // Policy loss of one agent under fixed pre-squash noise xi, laid out
    // (row, agent, act_dim); optionally the flat parameter gradient and the
    // per-row log-probs of this agent's fresh action. Pure.
    double policy_loss_eval(int agent, const std::vector<std::size_t>& rows,
                            const std::vector<double>& xi,
                            std::vector<double>* grad = nullptr,
                            std::vector<double>* logpi = nullptr) const;

    Mlp& policy(int agent) { return policy_[agent]; }
    Mlp& critic(int agent, int j) { return j ? q2_[agent] : q1_[agent]; }
    Mlp& critic_target(int agent, int j) { return j ? q2t_[agent] : q1t_[agent]; }
    double log_alpha(int agent) const { return log_alpha_[agent]; }
    RunningStat& obs_stat() { return obs_stat_; }
    RunningStat& reward_stat() { return reward_stat_; }
    std::int64_t updates_done() const { return updates_; }

    // Normalise one agent-width raw observation with the current statistics.
    void normalize_obs(const double* raw, double* out) const;

private:
    struct PolicyEval {
        std::vector<double> mu, log_sigma, action, xi;
        double logpi = 0.0;
        std::vector<std::uint8_t> clamp_gate;
        Mlp::Tape tape;
    };
    // Forward the agent's policy on a normalised observation with given (or
    // freshly drawn) noise; deterministic means xi = 0.
    PolicyEval policy_forward(int agent, const double* obs_norm,
                              const double* xi_fixed, bool deterministic,
                              Rng* rng) const;

    void build_joint_obs(const double* raw_joint, double* out_norm) const;

    MasacSpec spec_;
    Rng rng_;
    ReplayBuffer replay_;
    std::vector<Mlp> policy_, q1_, q2_, q1t_, q2t_;
    std::vector<AdamState> opt_policy_, opt_q1_, opt_q2_, opt_alpha_;
    std::vector<double> log_alpha_;
    RunningStat obs_stat_, reward_stat_;
    std::int64_t updates_ = 0;
};

} // namespace wec
