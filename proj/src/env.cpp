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

#include "wec/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "wec/error.hpp"

namespace wec {

double toy_step(ToyOscillator& s, double kp, double dt) {
    require(s.m > 0.0 && dt > 0.0 && kp >= 0.0, ErrorCode::InvalidArgument,
            "toy oscillator needs m > 0, dt > 0, kp >= 0");
    const double f = s.f0 * std::sin(s.omega * s.t) - s.cr * s.v - s.ks * s.z -
                     kp * s.v;
    s.v += dt * f / s.m;
    s.z += dt * s.v;
    s.t += dt;
    return kp * s.v * s.v;
}

double toy_optimal_damping(double m, double ks, double cr, double omega) {
    require(m > 0.0 && ks > 0.0 && cr > 0.0 && omega > 0.0,
            ErrorCode::InvalidArgument, "toy parameters must be positive");
    const double reactance = (ks - m * omega * omega) / omega;
    return std::sqrt(cr * cr + reactance * reactance);
}

double toy_average_power(double kp, ToyOscillator s, int settle_periods,
                         int measure_periods, int steps_per_period) {
    require(settle_periods >= 0 && measure_periods > 0 && steps_per_period > 1,
            ErrorCode::InvalidArgument, "bad toy averaging window");
    const double period = 2.0 * std::numbers::pi / s.omega;
    const double dt = period / steps_per_period;
    for (int i = 0; i < settle_periods * steps_per_period; ++i)
        toy_step(s, kp, dt);
    double energy = 0.0;
    const int n = measure_periods * steps_per_period;
    for (int i = 0; i < n; ++i) energy += toy_step(s, kp, dt) * dt;
    return energy / (measure_periods * period);
}

double map_action(double o, double k_base, double dk_frac) {
    require(k_base > 0.0 && dk_frac >= 0.0 && dk_frac < 1.0,
            ErrorCode::InvalidArgument, "bad action mapping parameters");
    const double oc = std::clamp(o, -1.0, 1.0);
    return k_base + oc * dk_frac * k_base;
}

std::vector<double> cooperative_rewards(const std::vector<double>& power,
                                        double gamma_p) {
    require(!power.empty(), ErrorCode::InvalidArgument, "no power values");
    require(gamma_p >= 0.0 && gamma_p <= 1.0, ErrorCode::InvalidArgument,
            "cooperation weight outside [0, 1]");
    double mean = 0.0;
    for (double p : power) mean += p;
    mean /= double(power.size());
    std::vector<double> r(power.size());
    for (std::size_t i = 0; i < power.size(); ++i)
        r[i] = (1.0 - gamma_p) * power[i] + gamma_p * mean;
    return r;
}

WaveTankEnv::WaveTankEnv(Simulation& sim, ControlConfig cfg)
    : sim_(sim), cfg_(cfg) {
    require(!sim_.bodies().empty(), ErrorCode::InvalidArgument,
            "control needs at least one floating body");
    require(cfg_.dt_ctrl > 0.0 && cfg_.episode_span > 0.0,
            ErrorCode::InvalidArgument, "bad control timing");
    require(cfg_.gauge_near > 0.0 && cfg_.gauge_far > cfg_.gauge_near,
            ErrorCode::InvalidArgument, "gauge offsets must be ordered");
    const int n = n_agents();
    kp_prev_.assign(n, cfg_.k_base);
    eta_prev_.assign(std::size_t(n) * 4, 0.0);
    e_mark_.assign(n, 0.0);
}

int WaveTankEnv::intervals_per_episode() const {
    return int(std::llround(cfg_.episode_span / cfg_.dt_ctrl));
}

void WaveTankEnv::prepare() {
    for (auto& b : sim_.bodies()) {
        b.state.schedule.active = false;
        b.state.kp = cfg_.k_base;
    }
    sim_.advance_to(cfg_.settle_time);
    snap_ = sim_.snapshot();
}

void WaveTankEnv::adopt_snapshot(std::vector<char> snap) {
    require(!snap.empty(), ErrorCode::InvalidArgument, "empty snapshot");
    snap_ = std::move(snap);
}

std::vector<double> WaveTankEnv::reset() {
    require(!snap_.empty(), ErrorCode::InvalidArgument,
            "no reset snapshot; call prepare() first");
    sim_.restore(snap_);
    episode_end_ = sim_.time() + cfg_.episode_span;
    std::fill(kp_prev_.begin(), kp_prev_.end(), cfg_.k_base);
    for (auto& b : sim_.bodies()) {
        b.state.schedule.active = false;
        b.state.kp = cfg_.k_base;
    }
    std::vector<double> obs;
    observe_all(obs, true);
    return obs;
}

bool WaveTankEnv::step(const std::vector<double>& actions,
                       std::vector<double>& power,
                       std::vector<double>& obs_next) {
    const int n = n_agents();
    require(int(actions.size()) == n, ErrorCode::InvalidArgument,
            "one action per body required");
    require(episode_end_ > 0.0, ErrorCode::InvalidArgument,
            "step before reset");
    const double t0 = sim_.time();
    const double t1 = std::min(t0 + cfg_.dt_ctrl, episode_end_);
    require(t1 > t0, ErrorCode::InvalidArgument,
            "control step past the episode end");
    for (int i = 0; i < n; ++i) {
        if (actions[i] < -1.0 || actions[i] > 1.0 ||
            !std::isfinite(actions[i]))
            ++clamp_events_;
        const double o = std::isfinite(actions[i]) ? actions[i] : 0.0;
        const double kp_new = map_action(o, cfg_.k_base, cfg_.dk_frac);
        auto& st = sim_.bodies()[i].state;
        st.schedule = {true, kp_prev_[i], kp_new, t0, t1};
        kp_prev_[i] = kp_new;
        e_mark_[i] = sim_.pto_energy(i);
    }
    sim_.advance_to(t1);
    power.resize(n);
    for (int i = 0; i < n; ++i)
        power[i] = (sim_.pto_energy(i) - e_mark_[i]) / (t1 - t0);
    observe_all(obs_next, false);
    return sim_.time() >= episode_end_ - 1e-12;
}

void WaveTankEnv::observe_all(std::vector<double>& out, bool prime) {
    const int n = n_agents();
    out.resize(std::size_t(n) * kObsWidth);
    for (int i = 0; i < n; ++i) {
        const auto& body = sim_.bodies()[i];
        const auto& st = body.state;
        // gauges sit outboard of the hull: two upstream, two downstream
        const double near = body.half_width + cfg_.gauge_near;
        const double far = body.half_width + cfg_.gauge_far;
        const double off[4] = {-far, -near, near, far};
        double* o = out.data() + std::size_t(i) * kObsWidth;
        for (int g = 0; g < 4; ++g) {
            const double eta = sim_.gauge(st.r0x + off[g], st.r0y);
            double* prev = &eta_prev_[std::size_t(i) * 4 + g];
            o[g] = eta;
            o[4 + g] = prime ? 0.0 : (eta - *prev) / cfg_.dt_ctrl;
            *prev = eta;
        }
        o[8] = st.v_prev;
        o[9] = st.r0z - st.z0;
        o[10] = st.a_z;
    }
}

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

} // namespace

std::vector<EpisodeLog> train_agents(WaveTankEnv& env, Masac& masac,
                                     std::ostream* progress,
                                     const std::function<void(const EpisodeLog&)>& on_episode,
                                     PhaseTimers* timers) {
    auto timed = [&](PhaseTimers::Phase p, auto&& fn) {
        if (!timers) return fn();
        PhaseScope scope(*timers, p);
        return fn();
    };
    const auto& cfg = env.config();
    const int n = env.n_agents();
    require(masac.spec().n_agents == n, ErrorCode::InvalidArgument,
            "trainer agent count must match body count");
    require(masac.spec().obs_dim == kObsWidth, ErrorCode::InvalidArgument,
            "trainer observation width mismatch");
    require(masac.spec().act_dim == 1, ErrorCode::InvalidArgument,
            "one damping action per agent expected");

    std::vector<EpisodeLog> logs;
    const int intervals = env.intervals_per_episode();
    for (int e = 0; e < cfg.episodes; ++e) {
        std::vector<double> obs = timed(PhaseTimers::Sph, [&] { return env.reset(); });
        EpisodeLog log;
        log.episode = e;
        log.returns.assign(n, 0.0);
        log.mean_kp.assign(n, 0.0);
        log.alpha.assign(n, 0.0);
        int updates = 0;
        std::vector<double> act(n), power, obs2;
        for (int k = 0; k < intervals; ++k) {
            timed(PhaseTimers::Rl, [&] {
                for (int i = 0; i < n; ++i)
                    act[i] = e < cfg.warmup_episodes
                                 ? masac.rng().uniform(-1.0, 1.0)
                                 : masac.act(i, obs.data() + i * kObsWidth,
                                             false)[0];
            });
            const bool done =
                timed(PhaseTimers::Sph,
                      [&] { return env.step(act, power, obs2); }) ||
                k == intervals - 1;
            if (!all_finite(obs2) || !all_finite(power)) {
                log.aborted = true;
                if (progress)
                    *progress << "episode " << e
                              << " aborted: non-finite state at interval " << k
                              << "\n";
                break;
            }
            Transition tr;
            tr.s = obs;
            tr.a = act;
            tr.r = cooperative_rewards(power, cfg.gamma_p);
            tr.s2 = obs2;
            tr.done = done;
            const MasacDiag d =
                timed(PhaseTimers::Rl, [&] { return masac.train_step(tr); });
            for (int i = 0; i < n; ++i) {
                log.returns[i] += tr.r[i];
                log.mean_kp[i] += env.kp(i) / double(intervals);
            }
            if (d.updated) {
                log.critic_loss += mean_of(d.critic_loss);
                log.policy_loss += mean_of(d.policy_loss);
                ++updates;
            }
            obs.swap(obs2);
        }
        if (updates > 0) {
            log.critic_loss /= double(updates);
            log.policy_loss /= double(updates);
        }
        for (int i = 0; i < n; ++i) log.alpha[i] = masac.alpha(i);
        if (progress) {
            *progress << "episode " << e << " return";
            for (int i = 0; i < n; ++i) *progress << ' ' << log.returns[i];
            *progress << " alpha " << log.alpha[0] << std::endl;
        }
        logs.push_back(std::move(log));
        if (on_episode) on_episode(logs.back());
    }
    return logs;
}

std::vector<std::vector<double>> evaluate(WaveTankEnv& env, Masac* masac,
                                          EvalTrace* trace) {
    const auto& cfg = env.config();
    const int n = env.n_agents();
    if (masac) {
        require(masac->spec().n_agents == n && masac->spec().obs_dim == kObsWidth,
                ErrorCode::InvalidArgument, "trainer/tank shape mismatch");
    }
    if (trace) {
        trace->t.clear();
        auto init = [&](std::vector<std::vector<double>>& v) {
            v.assign(n, {});
        };
        init(trace->eta_up), init(trace->eta_dn), init(trace->dz);
        init(trace->vz), init(trace->fz), init(trace->kp), init(trace->power);
    }
    std::vector<std::vector<double>> energy(cfg.eval_episodes,
                                            std::vector<double>(n, 0.0));
    const int intervals = env.intervals_per_episode();
    for (int e = 0; e < cfg.eval_episodes; ++e) {
        std::vector<double> obs = env.reset();
        std::vector<double> e0(n);
        for (int i = 0; i < n; ++i) e0[i] = env.sim().pto_energy(i);
        std::vector<double> act(n, 0.0), power, obs2;
        for (int k = 0; k < intervals; ++k) {
            if (masac)
                for (int i = 0; i < n; ++i)
                    act[i] = masac->act(i, obs.data() + i * kObsWidth, true)[0];
            env.step(act, power, obs2);
            if (trace && e == 0) {
                trace->t.push_back(env.sim().time());
                for (int i = 0; i < n; ++i) {
                    const double* o = obs2.data() + std::size_t(i) * kObsWidth;
                    const auto& st = env.sim().bodies()[i].state;
                    trace->eta_up[i].push_back(o[1]);
                    trace->eta_dn[i].push_back(o[2]);
                    trace->dz[i].push_back(o[9]);
                    trace->vz[i].push_back(st.vz);
                    trace->fz[i].push_back(-st.kp * st.vz);
                    trace->kp[i].push_back(env.kp(i));
                    trace->power[i].push_back(power[i]);
                }
            }
            obs.swap(obs2);
        }
        for (int i = 0; i < n; ++i)
            energy[e][i] = env.sim().pto_energy(i) - e0[i];
    }
    return energy;
}

} // namespace wec
