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

#include "wec/masac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wec/error.hpp"

namespace wec {

namespace {
constexpr double kLogSigMin = -20.0;
constexpr double kLogSigMax = 2.0;
constexpr double kSquashEps = 1e-6;
} // namespace

// ---------------------------------------------------------------------------

ReplayBuffer::ReplayBuffer(std::size_t capacity, const MasacSpec& spec)
    : capacity_(capacity),
      sw_(spec.joint_obs()),
      aw_(spec.joint_act()),
      nr_(std::size_t(spec.n_agents)) {
    require(capacity_ > 0, ErrorCode::InvalidArgument,
            "replay capacity must be positive");
    s_.resize(capacity_ * sw_);
    a_.resize(capacity_ * aw_);
    r_.resize(capacity_ * nr_);
    s2_.resize(capacity_ * sw_);
    done_.resize(capacity_);
}

void ReplayBuffer::push(const Transition& t) {
    require(t.s.size() == sw_ && t.s2.size() == sw_ && t.a.size() == aw_ &&
                t.r.size() == nr_,
            ErrorCode::InvalidArgument, "transition width mismatch");
    std::copy(t.s.begin(), t.s.end(), s_.begin() + head_ * sw_);
    std::copy(t.a.begin(), t.a.end(), a_.begin() + head_ * aw_);
    std::copy(t.r.begin(), t.r.end(), r_.begin() + head_ * nr_);
    std::copy(t.s2.begin(), t.s2.end(), s2_.begin() + head_ * sw_);
    done_[head_] = t.done ? 1 : 0;
    head_ = (head_ + 1) % capacity_;
    count_ = std::min(count_ + 1, capacity_);
}

std::vector<std::size_t>
ReplayBuffer::sample_indices(std::size_t k, Rng& rng) const {
    require(k <= count_, ErrorCode::InvalidArgument,
            "batch larger than replay fill");
    std::vector<std::size_t> out;
    out.reserve(k);
    std::vector<std::uint8_t> chosen(count_, 0);
    for (std::size_t j = count_ - k; j < count_; ++j) {
        const std::size_t t = rng.below(j + 1);
        if (chosen[t]) {
            out.push_back(j);
            chosen[j] = 1;
        } else {
            out.push_back(t);
            chosen[t] = 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Masac::Masac(MasacSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), rng_(seed), replay_(spec_.replay_capacity, spec_) {
    require(spec_.n_agents >= 1 && spec_.obs_dim >= 1 && spec_.act_dim >= 1,
            ErrorCode::InvalidArgument, "masac sizes must be positive");
    require(spec_.batch >= 1 && spec_.min_fill >= std::size_t(spec_.batch),
            ErrorCode::InvalidArgument,
            "min_fill must be at least one batch");
    require(spec_.alpha_init > 0.0, ErrorCode::InvalidArgument,
            "initial temperature must be positive");

    std::vector<int> pol_sizes = {spec_.obs_dim};
    for (int h : spec_.hidden) pol_sizes.push_back(h);
    pol_sizes.push_back(2 * spec_.act_dim); // mean head then log-std head

    std::vector<int> q_sizes = {int(spec_.joint_obs() + spec_.joint_act())};
    for (int h : spec_.hidden) q_sizes.push_back(h);
    q_sizes.push_back(1);

    for (int i = 0; i < spec_.n_agents; ++i) {
        policy_.emplace_back(pol_sizes, rng_, 1e-2);
        q1_.emplace_back(q_sizes, rng_);
        q2_.emplace_back(q_sizes, rng_);
        q1t_.push_back(q1_.back());
        q2t_.push_back(q2_.back());
        opt_policy_.emplace_back();
        opt_policy_.back().resize(policy_.back().params().size());
        opt_q1_.emplace_back();
        opt_q1_.back().resize(q1_.back().params().size());
        opt_q2_.emplace_back();
        opt_q2_.back().resize(q2_.back().params().size());
        opt_alpha_.emplace_back();
        opt_alpha_.back().resize(1);
        log_alpha_.push_back(std::log(spec_.alpha_init));
    }
    obs_stat_.resize(std::size_t(spec_.obs_dim));
    reward_stat_.resize(1);
}

void Masac::normalize_obs(const double* raw, double* out) const {
    for (int k = 0; k < spec_.obs_dim; ++k)
        out[k] = (raw[k] - obs_stat_.mean[k]) / obs_stat_.sd(k);
}

void Masac::build_joint_obs(const double* raw_joint, double* out_norm) const {
    for (int i = 0; i < spec_.n_agents; ++i)
        normalize_obs(raw_joint + std::size_t(i) * spec_.obs_dim,
                      out_norm + std::size_t(i) * spec_.obs_dim);
}

Masac::PolicyEval Masac::policy_forward(int agent, const double* obs_norm,
                                        const double* xi_fixed,
                                        bool deterministic, Rng* rng) const {
    PolicyEval ev;
    const int d = spec_.act_dim;
    std::vector<double> head = policy_[agent].forward(obs_norm, &ev.tape);
    ev.mu.assign(head.begin(), head.begin() + d);
    ev.log_sigma.resize(d);
    ev.clamp_gate.resize(d);
    ev.xi.resize(d);
    ev.action.resize(d);
    ev.logpi = 0.0;
    for (int k = 0; k < d; ++k) {
        const double raw = head[d + k];
        const double ls = std::clamp(raw, kLogSigMin, kLogSigMax);
        ev.log_sigma[k] = ls;
        ev.clamp_gate[k] = (raw > kLogSigMin && raw < kLogSigMax) ? 1 : 0;
        const double sigma = std::exp(ls);
        double xi = 0.0;
        if (!deterministic) xi = xi_fixed ? xi_fixed[k] : rng->normal();
        ev.xi[k] = xi;
        const double u = ev.mu[k] + sigma * xi;
        const double a = std::tanh(u);
        ev.action[k] = a;
        ev.logpi += -0.5 * xi * xi - 0.5 * std::log(2.0 * std::numbers::pi) -
                    ls - std::log(1.0 - a * a + kSquashEps);
    }
    return ev;
}

std::vector<double> Masac::act(int agent, const double* obs,
                               bool deterministic) {
    return sample(agent, obs, deterministic).first;
}

std::pair<std::vector<double>, double>
Masac::sample(int agent, const double* obs, bool deterministic) {
    require(agent >= 0 && agent < spec_.n_agents, ErrorCode::InvalidArgument,
            "agent index out of range");
    std::vector<double> norm(spec_.obs_dim);
    normalize_obs(obs, norm.data());
    PolicyEval ev =
        policy_forward(agent, norm.data(), nullptr, deterministic, &rng_);
    return {std::move(ev.action), ev.logpi};
}

void Masac::store(const Transition& t) {
    // observation statistics learn from every agent's current view; the
    // reward scale estimator sees raw rewards, then the stored copy is
    // divided by the updated running deviation
    for (int i = 0; i < spec_.n_agents; ++i)
        obs_stat_.add(t.s.data() + std::size_t(i) * spec_.obs_dim);
    for (double r : t.r) reward_stat_.add(&r);
    Transition scaled = t;
    const double sd = reward_stat_.sd(0);
    for (double& r : scaled.r) r /= sd;
    replay_.push(scaled);
}

std::vector<double>
Masac::critic_targets(const std::vector<std::size_t>& rows) {
    const int n = spec_.n_agents;
    const std::size_t jw = spec_.joint_obs() + spec_.joint_act();
    std::vector<double> y(rows.size() * n);
    std::vector<double> s2n(spec_.joint_obs());
    std::vector<double> x2(jw);
    std::vector<double> logpi(n);

    for (std::size_t b = 0; b < rows.size(); ++b) {
        const std::size_t row = rows[b];
        build_joint_obs(replay_.s2(row), s2n.data());
        std::copy(s2n.begin(), s2n.end(), x2.begin());
        for (int k = 0; k < n; ++k) {
            PolicyEval ev = policy_forward(
                k, s2n.data() + std::size_t(k) * spec_.obs_dim, nullptr,
                false, &rng_);
            logpi[k] = ev.logpi;
            std::copy(ev.action.begin(), ev.action.end(),
                      x2.begin() + spec_.joint_obs() +
                          std::size_t(k) * spec_.act_dim);
        }
        double ent_all = 0.0;
        for (int k = 0; k < n; ++k)
            ent_all += std::exp(log_alpha_[k]) * logpi[k];
        const double cont = replay_.done(row) ? 0.0 : 1.0;
        for (int i = 0; i < n; ++i) {
            const double qa = q1t_[i].forward(x2.data())[0];
            const double qb = q2t_[i].forward(x2.data())[0];
            const double ent = spec_.summed_entropy
                                   ? ent_all
                                   : std::exp(log_alpha_[i]) * logpi[i];
            y[b * n + i] = replay_.r(row)[i] +
                           spec_.gamma * cont * (std::min(qa, qb) - ent);
        }
    }
    return y;
}

double Masac::critic_loss_eval(int agent, int j,
                               const std::vector<std::size_t>& rows,
                               const std::vector<double>& y,
                               std::vector<double>* grad) const {
    const Mlp& net = j ? q2_[agent] : q1_[agent];
    const std::size_t jw = spec_.joint_obs() + spec_.joint_act();
    std::vector<double> x(jw);
    if (grad) grad->assign(net.params().size(), 0.0);
    double loss = 0.0;
    Mlp::Tape tape;
    for (std::size_t b = 0; b < rows.size(); ++b) {
        const std::size_t row = rows[b];
        build_joint_obs(replay_.s(row), x.data());
        const double* act = replay_.a(row);
        std::copy(act, act + spec_.joint_act(), x.begin() + spec_.joint_obs());
        const double q = net.forward(x.data(), grad ? &tape : nullptr)[0];
        const double e = q - y[b * spec_.n_agents + agent];
        loss += e * e / double(rows.size());
        if (grad) {
            const double dy = 2.0 * e / double(rows.size());
            net.backward(tape, &dy, *grad);
        }
    }
    return loss;
}

double Masac::policy_loss_eval(int agent, const std::vector<std::size_t>& rows,
                               const std::vector<double>& xi,
                               std::vector<double>* grad,
                               std::vector<double>* logpi_out) const {
    const int n = spec_.n_agents, d = spec_.act_dim;
    require(xi.size() == rows.size() * std::size_t(n) * d,
            ErrorCode::InvalidArgument, "noise block width mismatch");
    const std::size_t jw = spec_.joint_obs() + spec_.joint_act();
    const double alpha = std::exp(log_alpha_[agent]);
    const double bump = 1.0 / double(rows.size());

    std::vector<double> sn(spec_.joint_obs());
    std::vector<double> x(jw);
    if (grad) grad->assign(policy_[agent].params().size(), 0.0);
    if (logpi_out) logpi_out->assign(rows.size(), 0.0);

    double loss = 0.0;
    Mlp::Tape q_tape;
    std::vector<double> dx(jw);
    std::vector<double> head_grad(2 * d);
    std::vector<double> qgrad_scratch;

    for (std::size_t b = 0; b < rows.size(); ++b) {
        const std::size_t row = rows[b];
        build_joint_obs(replay_.s(row), sn.data());
        std::copy(sn.begin(), sn.end(), x.begin());

        PolicyEval mine;
        for (int k = 0; k < n; ++k) {
            PolicyEval ev = policy_forward(
                k, sn.data() + std::size_t(k) * spec_.obs_dim,
                xi.data() + (b * std::size_t(n) + k) * d, false, nullptr);
            if (k == agent) mine = std::move(ev);
            const PolicyEval& use = (k == agent) ? mine : ev;
            std::copy(use.action.begin(), use.action.end(),
                      x.begin() + spec_.joint_obs() + std::size_t(k) * d);
        }

        // pessimistic online critic and its action sensitivity
        const double qa = q1_[agent].forward(x.data(), &q_tape)[0];
        Mlp::Tape tape_b;
        const double qb = q2_[agent].forward(x.data(), &tape_b)[0];
        const bool use_a = qa <= qb;
        const double qmin = use_a ? qa : qb;
        loss += bump * (alpha * mine.logpi - qmin);
        if (logpi_out) (*logpi_out)[b] = mine.logpi;

        if (!grad) continue;
        const double one = 1.0;
        qgrad_scratch.assign(
            (use_a ? q1_[agent] : q2_[agent]).params().size(), 0.0);
        (use_a ? q1_[agent] : q2_[agent])
            .backward(use_a ? q_tape : tape_b, &one, qgrad_scratch, dx.data());

        for (int k = 0; k < d; ++k) {
            const double a = mine.action[k];
            const double sig = std::exp(mine.log_sigma[k]);
            const double xi_k = mine.xi[k];
            const double da_du = 1.0 - a * a;
            const double dlp_da = 2.0 * a / (1.0 - a * a + kSquashEps);
            const double dq_da =
                dx[spec_.joint_obs() + std::size_t(agent) * d + k];
            // d(loss)/dmu and d(loss)/dlog_sigma for this sample
            const double dmu = alpha * dlp_da * da_du - dq_da * da_du;
            double dls = alpha * (-1.0 + dlp_da * da_du * sig * xi_k) -
                         dq_da * da_du * sig * xi_k;
            if (!mine.clamp_gate[k]) dls = 0.0;
            head_grad[k] = bump * dmu;
            head_grad[d + k] = bump * dls;
        }
        policy_[agent].backward(mine.tape, head_grad.data(), *grad);
    }
    return loss;
}

MasacDiag Masac::update() {
    const int n = spec_.n_agents, d = spec_.act_dim;
    require(replay_.size() >= std::size_t(spec_.batch), ErrorCode::Internal,
            "update before one batch of transitions");

    MasacDiag diag;
    diag.updated = true;
    diag.critic_loss.assign(n, 0.0);
    diag.policy_loss.assign(n, 0.0);
    diag.alpha.assign(n, 0.0);
    diag.mean_logpi.assign(n, 0.0);

    const std::vector<std::size_t> rows =
        replay_.sample_indices(std::size_t(spec_.batch), rng_);
    const std::vector<double> y = critic_targets(rows);

    std::vector<double> grad;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double loss = critic_loss_eval(i, j, rows, y, &grad);
            diag.critic_loss[i] += 0.5 * loss;
            adam_step(critic(i, j).params(), grad, j ? opt_q2_[i] : opt_q1_[i],
                      spec_.lr);
        }
    }

    std::vector<double> xi(rows.size() * std::size_t(n) * d);
    std::vector<double> logpi;
    for (int i = 0; i < n; ++i) {
        for (double& v : xi) v = rng_.normal();
        diag.policy_loss[i] = policy_loss_eval(i, rows, xi, &grad, &logpi);
        adam_step(policy_[i].params(), grad, opt_policy_[i], spec_.lr);

        double mean_lp = 0.0;
        for (double lp : logpi) mean_lp += lp / double(logpi.size());
        diag.mean_logpi[i] = mean_lp;

        // temperature: d(loss)/d(log alpha) = -alpha*(mean logpi + H_target)
        std::vector<double> la = {log_alpha_[i]};
        const std::vector<double> ga = {-std::exp(log_alpha_[i]) *
                                        (mean_lp + spec_.h_target)};
        adam_step(la, ga, opt_alpha_[i], spec_.alpha_lr);
        log_alpha_[i] = la[0];
        diag.alpha[i] = std::exp(log_alpha_[i]);
    }

    for (int i = 0; i < n; ++i) {
        soft_update(q1t_[i].params(), q1_[i].params(), spec_.tau);
        soft_update(q2t_[i].params(), q2_[i].params(), spec_.tau);
    }

    // mean online Q over the batch, first critic of each agent
    double mq = 0.0;
    std::vector<double> x(spec_.joint_obs() + spec_.joint_act());
    for (std::size_t b = 0; b < rows.size(); ++b) {
        build_joint_obs(replay_.s(rows[b]), x.data());
        const double* act = replay_.a(rows[b]);
        std::copy(act, act + spec_.joint_act(), x.begin() + spec_.joint_obs());
        for (int i = 0; i < n; ++i)
            mq += q1_[i].forward(x.data())[0] / double(rows.size() * n);
    }
    diag.mean_q = mq;
    updates_ += 1;
    return diag;
}

MasacDiag Masac::train_step(const Transition& t) {
    store(t);
    if (replay_.size() >= spec_.min_fill) return update();
    MasacDiag diag;
    diag.alpha.resize(spec_.n_agents);
    for (int i = 0; i < spec_.n_agents; ++i) diag.alpha[i] = alpha(i);
    return diag;
}

// ---------------------------------------------------------------------------

namespace {
void put_stat(ByteWriter& w, const RunningStat& st) {
    w.vec(st.mean);
    w.vec(st.m2);
    w.i64(st.n);
}
void get_stat(ByteReader& r, RunningStat& st, std::size_t dim) {
    st.mean = r.vec<double>();
    st.m2 = r.vec<double>();
    st.n = r.i64();
    require(st.mean.size() == dim && st.m2.size() == dim, ErrorCode::Version,
            "normaliser width mismatch");
}
void put_adam(ByteWriter& w, const AdamState& st) {
    w.vec(st.m);
    w.vec(st.v);
    w.i64(st.t);
}
void get_adam(ByteReader& r, AdamState& st, std::size_t n) {
    st.m = r.vec<double>();
    st.v = r.vec<double>();
    st.t = r.i64();
    require(st.m.size() == n && st.v.size() == n, ErrorCode::Version,
            "optimiser state width mismatch");
}
} // namespace

std::vector<char> Masac::save() const {
    ByteWriter w;
    w.str("wecckpt");
    w.u32(1);
    w.u32(std::uint32_t(spec_.n_agents));
    w.u32(std::uint32_t(spec_.obs_dim));
    w.u32(std::uint32_t(spec_.act_dim));
    w.u32(std::uint32_t(spec_.hidden.size()));
    for (int h : spec_.hidden) w.u32(std::uint32_t(h));
    w.f64(spec_.gamma);
    w.f64(spec_.tau);
    w.f64(spec_.lr);
    w.f64(spec_.alpha_lr);
    w.f64(spec_.h_target);
    w.u8(spec_.summed_entropy ? 1 : 0);
    for (int i = 0; i < spec_.n_agents; ++i) {
        w.vec(policy_[i].params());
        w.vec(q1_[i].params());
        w.vec(q2_[i].params());
        w.vec(q1t_[i].params());
        w.vec(q2t_[i].params());
        put_adam(w, opt_policy_[i]);
        put_adam(w, opt_q1_[i]);
        put_adam(w, opt_q2_[i]);
        put_adam(w, opt_alpha_[i]);
        w.f64(log_alpha_[i]);
    }
    put_stat(w, obs_stat_);
    put_stat(w, reward_stat_);
    w.str(rng_.serialize());
    w.i64(updates_);
    return w.take();
}

void Masac::load(const std::vector<char>& bytes) {
    ByteReader r(bytes);
    require(r.str() == "wecckpt", ErrorCode::Version, "not a checkpoint file");
    require(r.u32() == 1, ErrorCode::Version, "unknown checkpoint version");
    require(int(r.u32()) == spec_.n_agents, ErrorCode::Version,
            "checkpoint agent count mismatch");
    require(int(r.u32()) == spec_.obs_dim, ErrorCode::Version,
            "checkpoint observation width mismatch");
    require(int(r.u32()) == spec_.act_dim, ErrorCode::Version,
            "checkpoint action width mismatch");
    require(r.u32() == spec_.hidden.size(), ErrorCode::Version,
            "checkpoint depth mismatch");
    for (int h : spec_.hidden)
        require(int(r.u32()) == h, ErrorCode::Version,
                "checkpoint layer width mismatch");
    const double g = r.f64(), tau = r.f64(), lr = r.f64(), alr = r.f64(),
                 ht = r.f64();
    const bool summed = r.u8() != 0;
    require(g == spec_.gamma && tau == spec_.tau && lr == spec_.lr &&
                alr == spec_.alpha_lr && ht == spec_.h_target &&
                summed == spec_.summed_entropy,
            ErrorCode::Version, "checkpoint hyperparameter mismatch");
    for (int i = 0; i < spec_.n_agents; ++i) {
        auto take_params = [&](Mlp& net) {
            std::vector<double> p = r.vec<double>();
            require(p.size() == net.params().size(), ErrorCode::Version,
                    "checkpoint parameter block mismatch");
            net.params() = std::move(p);
        };
        take_params(policy_[i]);
        take_params(q1_[i]);
        take_params(q2_[i]);
        take_params(q1t_[i]);
        take_params(q2t_[i]);
        get_adam(r, opt_policy_[i], policy_[i].params().size());
        get_adam(r, opt_q1_[i], q1_[i].params().size());
        get_adam(r, opt_q2_[i], q2_[i].params().size());
        get_adam(r, opt_alpha_[i], 1);
        log_alpha_[i] = r.f64();
    }
    get_stat(r, obs_stat_, std::size_t(spec_.obs_dim));
    get_stat(r, reward_stat_, 1);
    rng_.deserialize(r.str());
    updates_ = r.i64();
    require(r.exhausted(), ErrorCode::Version, "trailing checkpoint bytes");
}

} // namespace wec
