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

#include "wecsim.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "wec/runio.hpp"
#include "wec/simulation.hpp"

using namespace wec;

namespace {

thread_local std::string t_last_error;

int set_error(ErrorCode code, const char* what) {
    t_last_error = what ? what : "";
    return static_cast<int>(code);
}

int clear_error() {
    t_last_error.clear();
    return WECSIM_OK;
}

// run fn, folding every exception into a status code
template <typename F>
int guarded(F&& fn) {
    try {
        fn();
        return clear_error();
    } catch (const Error& e) {
        return set_error(e.code(), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(ErrorCode::Internal, "out of memory");
    } catch (const std::exception& e) {
        return set_error(ErrorCode::Internal, e.what());
    }
}

RunConfig load_config(const char* path, uint64_t seed_override,
                      double fixed_dt, int dim_override) {
    require(path != nullptr, ErrorCode::InvalidArgument,
            "config path is null");
    RunConfig cfg = parse_config(path);
    if (seed_override > 0) cfg.seed = seed_override;
    if (fixed_dt > 0) cfg.fixed_dt = fixed_dt;
    if (dim_override > 0) {
        require(dim_override == 2 || dim_override == 3,
                ErrorCode::InvalidArgument, "dim override must be 2 or 3");
        cfg.scene.dim = dim_override;
    }
    return cfg;
}

} // namespace

// the opaque handle: a tank plus the config it came from
struct wecsim_sim {
    RunConfig cfg;
    Simulation sim;

    wecsim_sim(RunConfig c, uint64_t seed) : cfg(std::move(c)), sim(cfg.scene, seed) {
        sim.params.reuse_half_step_neighbors = true;
    }
};

namespace {

void sim_create_common(RunConfig cfg, uint64_t seed_override,
                       wecsim_sim** out) {
    if (seed_override > 0) cfg.seed = seed_override;
    const uint64_t seed = cfg.seed;
    *out = new wecsim_sim(std::move(cfg), seed);
}

} // namespace

extern "C" {

const char* wecsim_version(void) { return kVersion; }

const char* wecsim_last_error(void) { return t_last_error.c_str(); }

int wecsim_sim_create(const char* config_path, uint64_t seed_override,
                      wecsim_sim** out) {
    if (!out) return set_error(ErrorCode::InvalidArgument, "out handle is null");
    *out = nullptr;
    return guarded([&] {
        sim_create_common(load_config(config_path, 0, 0, 0), seed_override, out);
    });
}

int wecsim_sim_create_text(const char* config_json, uint64_t seed_override,
                           wecsim_sim** out) {
    if (!out) return set_error(ErrorCode::InvalidArgument, "out handle is null");
    *out = nullptr;
    return guarded([&] {
        require(config_json != nullptr, ErrorCode::InvalidArgument,
                "config text is null");
        sim_create_common(parse_config_text(config_json), seed_override, out);
    });
}

void wecsim_sim_destroy(wecsim_sim* sim) { delete sim; }

int wecsim_sim_advance(wecsim_sim* sim, double t_target) {
    if (!sim) return set_error(ErrorCode::InvalidArgument, "null handle");
    return guarded([&] { sim->sim.advance_to(t_target); });
}

int wecsim_sim_step(wecsim_sim* sim, double dt_cap, double* dt_taken) {
    if (!sim) return set_error(ErrorCode::InvalidArgument, "null handle");
    return guarded([&] {
        sim->sim.step(dt_cap > 0 ? dt_cap : 1e300);
        if (dt_taken) *dt_taken = sim->sim.last_dt();
    });
}

double wecsim_sim_time(const wecsim_sim* sim) {
    return sim ? sim->sim.time() : 0.0;
}

long long wecsim_sim_particles(const wecsim_sim* sim) {
    return sim ? static_cast<long long>(sim->sim.particles().count()) : 0;
}

int wecsim_sim_body_count(const wecsim_sim* sim) {
    return sim ? static_cast<int>(sim->sim.bodies().size()) : 0;
}

int wecsim_sim_gauge(const wecsim_sim* sim, double x, double* eta) {
    if (!sim || !eta)
        return set_error(ErrorCode::InvalidArgument, "null handle or output");
    return guarded([&] { *eta = sim->sim.gauge(x); });
}

static const FloatingBody& body_at(const wecsim_sim* sim, int body) {
    require(body >= 0 && std::size_t(body) < sim->sim.bodies().size(),
            ErrorCode::InvalidArgument, "body index out of range");
    return sim->sim.bodies()[body];
}

int wecsim_sim_body_state(const wecsim_sim* sim, int body, double* dz,
                          double* vz, double* kp) {
    if (!sim) return set_error(ErrorCode::InvalidArgument, "null handle");
    return guarded([&] {
        const auto& st = body_at(sim, body).state;
        if (dz) *dz = st.r0z - st.z0;
        if (vz) *vz = st.vz;
        if (kp) *kp = st.kp;
    });
}

int wecsim_sim_set_kp(wecsim_sim* sim, int body, double kp) {
    if (!sim) return set_error(ErrorCode::InvalidArgument, "null handle");
    return guarded([&] {
        require(kp >= 0, ErrorCode::InvalidArgument,
                "damping must be non-negative");
        require(body >= 0 && std::size_t(body) < sim->sim.bodies().size(),
                ErrorCode::InvalidArgument, "body index out of range");
        auto& state = sim->sim.bodies()[body].state;
        state.schedule.active = false;
        state.kp = kp;
    });
}

int wecsim_sim_pto(const wecsim_sim* sim, int body, double* energy,
                   double* power) {
    if (!sim) return set_error(ErrorCode::InvalidArgument, "null handle");
    return guarded([&] {
        body_at(sim, body);
        if (energy) *energy = sim->sim.pto_energy(body);
        if (power) *power = sim->sim.pto_power(body);
    });
}

int wecsim_cmd_simulate(const char* config_path, const char* out_dir,
                        uint64_t seed_override, double fixed_dt,
                        int dim_override) {
    return guarded([&] {
        require(out_dir != nullptr, ErrorCode::InvalidArgument,
                "output directory is null");
        cmd_simulate(load_config(config_path, seed_override, fixed_dt, dim_override),
                     out_dir);
    });
}

int wecsim_cmd_sweep(const char* config_path, const char* out_dir,
                     const double* kps, size_t n_kp, uint64_t seed_override,
                     double fixed_dt, int dim_override) {
    return guarded([&] {
        require(out_dir != nullptr, ErrorCode::InvalidArgument,
                "output directory is null");
        require(kps != nullptr && n_kp > 0, ErrorCode::InvalidArgument,
                "sweep needs at least one kp value");
        cmd_sweep(load_config(config_path, seed_override, fixed_dt, dim_override),
                  std::vector<double>(kps, kps + n_kp), out_dir);
    });
}

int wecsim_cmd_train(const char* config_path, const char* out_dir,
                     uint64_t seed_override, double fixed_dt,
                     int dim_override) {
    return guarded([&] {
        require(out_dir != nullptr, ErrorCode::InvalidArgument,
                "output directory is null");
        cmd_train(load_config(config_path, seed_override, fixed_dt, dim_override),
                  out_dir);
    });
}

int wecsim_cmd_eval(const char* config_path, const char* checkpoint_path,
                    const char* out_dir, uint64_t seed_override,
                    double fixed_dt, int dim_override) {
    return guarded([&] {
        require(out_dir != nullptr, ErrorCode::InvalidArgument,
                "output directory is null");
        require(checkpoint_path != nullptr, ErrorCode::InvalidArgument,
                "checkpoint path is null");
        cmd_eval(load_config(config_path, seed_override, fixed_dt, dim_override),
                 checkpoint_path, out_dir);
    });
}

int wecsim_cmd_analyze(const char* series_csv, const char* out_dir) {
    return guarded([&] {
        require(series_csv != nullptr && out_dir != nullptr,
                ErrorCode::InvalidArgument, "null path");
        cmd_analyze(series_csv, out_dir);
    });
}

} // extern "C"
