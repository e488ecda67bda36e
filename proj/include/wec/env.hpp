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

#include <functional>
#include <iosfwd>
#include <vector>

#include "wec/masac.hpp"
#include "wec/simulation.hpp"

namespace wec {

// --- analytic surrogate: forced, damped oscillator with a PTO damper ---
//
// m z'' = f0 sin(omega t) - cr z' - ks z - kp z'. Cheap enough to verify the
// whole learning stack against a closed-form optimum before any tank runs.
struct ToyOscillator {
    double m = 1.0, ks = 4.0, cr = 0.5, omega = 1.0, f0 = 1.0;
    double z = 0.0, v = 0.0, t = 0.0;
};

// One semi-implicit (symplectic Euler) step under damping kp; returns the
// instantaneous absorbed power kp*v^2 after the update.
double toy_step(ToyOscillator& s, double kp, double dt);

// Impedance-matched optimum sqrt(cr^2 + ((ks - m omega^2)/omega)^2).
double toy_optimal_damping(double m, double ks, double cr, double omega);

// Average absorbed power at constant kp: integrate settle_periods from the
// prototype state, then average over measure_periods.
double toy_average_power(double kp, ToyOscillator proto, int settle_periods = 10,
                         int measure_periods = 10, int steps_per_period = 200);

// --- action-to-damping mapping ---
//
// kp = k_base + o * dk_frac * k_base with o in [-1, 1]; out-of-range actions
// clamp, so kp always stays inside [1 - dk_frac, 1 + dk_frac] * k_base.
double map_action(double o, double k_base, double dk_frac = 0.9);

// r_i = (1 - gamma_p) P_i + gamma_p * mean(P): each device's reward blends
// its own absorbed power with the farm average. Sum over agents is sum(P)
// for every gamma_p in [0, 1].
std::vector<double> cooperative_rewards(const std::vector<double>& power,
                                        double gamma_p);

// Width of one agent's observation: four gauge elevations, their rates,
// previous-step heave velocity, heave offset, heave acceleration.
inline constexpr int kObsWidth = 11;

struct ControlConfig {
    double k_base = 700.0;   // N s/m, the constant-damping baseline
    double dk_frac = 0.9;    // action reach as a fraction of k_base
    double dt_ctrl = 0.1;    // s between control decisions
    double gauge_near = 0.1; // gauge offsets outboard of each body edge, m;
    double gauge_far = 0.2;  // adjacent gauges sit 0.1 m apart
    double episode_span = 10.0; // s of simulated time per episode
    double settle_time = 10.0;  // run-in before the reset snapshot is taken
    int episodes = 100;
    int warmup_episodes = 10;   // uniform-random actions while the buffer fills
    int eval_episodes = 10;
    double gamma_p = 0.7;       // cooperation weight in the reward blend
};

// Control-loop bridge between the tank and the agents: owns the episode
// snapshot, extracts observations, schedules damping ramps, and integrates
// per-interval absorbed power. One agent per floating body.
class WaveTankEnv {
public:
    WaveTankEnv(Simulation& sim, ControlConfig cfg);

    Simulation& sim() { return sim_; }
    const ControlConfig& config() const { return cfg_; }
    int n_agents() const { return int(sim_.bodies().size()); }
    int intervals_per_episode() const;

    // Run the tank to settle_time under constant k_base and keep the state
    // as the episode reset point. adopt_snapshot() reuses a saved one.
    void prepare();
    void adopt_snapshot(std::vector<char> snap);
    const std::vector<char>& snapshot() const { return snap_; }

    // Restore the reset point and return the joint observation (gauge rates
    // prime to zero). Layout: agent-major, kObsWidth values each.
    std::vector<double> reset();

    // Schedule each body's damping ramp from the joint action, advance one
    // control interval, report per-agent interval-averaged power and the
    // next joint observation. True once the episode span is exhausted.
    bool step(const std::vector<double>& actions, std::vector<double>& power,
              std::vector<double>& obs_next);

    // Damping value in force at the end of the last completed interval.
    double kp(int agent) const { return kp_prev_[agent]; }
    // Out-of-range actions seen so far (clamped, counted, never fatal).
    std::int64_t clamp_events() const { return clamp_events_; }

private:
    void observe_all(std::vector<double>& out, bool prime);

    Simulation& sim_;
    ControlConfig cfg_;
    std::vector<char> snap_;
    double episode_end_ = 0.0;
    std::vector<double> kp_prev_;   // per agent, ramp start for the next interval
    std::vector<double> eta_prev_;  // per agent x 4, previous-tick elevations
    std::vector<double> e_mark_;    // per agent, PTO energy at interval start
    std::int64_t clamp_events_ = 0;
};

struct EpisodeLog {
    int episode = 0;
    bool aborted = false;               // non-finite observation cut it short
    std::vector<double> returns;        // per agent, raw (pre-scaling) rewards
    std::vector<double> mean_kp;        // per agent, interval-end average
    std::vector<double> alpha;          // per agent, temperature after the episode
    double critic_loss = 0.0, policy_loss = 0.0; // means over the episode's updates
};

// Full training loop: warm-up episodes act uniformly at random, later ones
// sample the policies; every interval feeds one joint transition to the
// trainer. Episodes restore the snapshot exactly, so same-seed runs repeat
// bitwise. Progress lines (one per episode) go to `progress` when given;
// `on_episode` fires after each episode's log entry is final (checkpoint
// hook); `timers` splits wall time into tank stepping vs trainer updates.
std::vector<EpisodeLog> train_agents(WaveTankEnv& env, Masac& masac,
                                     std::ostream* progress = nullptr,
                                     const std::function<void(const EpisodeLog&)>& on_episode = {},
                                     PhaseTimers* timers = nullptr);

// Interval-resolution trace of the first evaluation episode, per agent:
// upstream/downstream near-gauge elevation, heave offset and velocity, PTO
// force, damping, interval power.
struct EvalTrace {
    std::vector<double> t;
    std::vector<std::vector<double>> eta_up, eta_dn, dz, vz, fz, kp, power;
};

// Deterministic evaluation: tanh(mu) actions when a trainer is given, the
// constant k_base baseline when null. Returns per-episode, per-agent PTO
// energy over the episode span; all episodes start from the same snapshot,
// so baseline and policy runs pair exactly.
std::vector<std::vector<double>> evaluate(WaveTankEnv& env, Masac* masac,
                                          EvalTrace* trace = nullptr);

} // namespace wec
