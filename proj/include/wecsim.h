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

/* C interface to the wecsim core: a wave tank handle for embedding, plus the
 * five whole-run commands the CLI exposes. Every function returns a status
 * code; wecsim_last_error() describes the most recent failure on the calling
 * thread. */

#ifndef WECSIM_H
#define WECSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define WECSIM_API_VERSION "0.1.0"

/* Status codes, mirroring the core error categories one-to-one. */
enum wecsim_status {
    WECSIM_OK = 0,
    WECSIM_ERR_ARGUMENT = 1, /* bad argument or null handle */
    WECSIM_ERR_CONFIG = 2,   /* config schema or constraint violation */
    WECSIM_ERR_IO = 3,       /* unreadable or unwritable file */
    WECSIM_ERR_NUMERIC = 4,  /* solver produced NaN/Inf or lost positivity */
    WECSIM_ERR_VERSION = 5,  /* snapshot/checkpoint version mismatch */
    WECSIM_ERR_INTERNAL = 6
};

/* Library version string (static storage). */
const char* wecsim_version(void);

/* Message for the last failure on this thread; empty string if none. The
 * buffer is thread-local and overwritten by the next failing call. */
const char* wecsim_last_error(void);

/* ---- wave tank handle ---------------------------------------------- */

typedef struct wecsim_sim wecsim_sim;

/* Build a tank from a JSON config file (strict schema; empty file = the
 * reference 2-D tank). seed_override > 0 replaces the config seed. */
int wecsim_sim_create(const char* config_path, uint64_t seed_override,
                      wecsim_sim** out);

/* Same, but the config document is passed as a string. */
int wecsim_sim_create_text(const char* config_json, uint64_t seed_override,
                           wecsim_sim** out);

void wecsim_sim_destroy(wecsim_sim* sim);

/* Advance to a target time (adaptive stepping, exact landing). */
int wecsim_sim_advance(wecsim_sim* sim, double t_target);

/* One step, at most dt_cap; the step actually taken lands in *dt_taken
 * when non-null. */
int wecsim_sim_step(wecsim_sim* sim, double dt_cap, double* dt_taken);

double wecsim_sim_time(const wecsim_sim* sim);
long long wecsim_sim_particles(const wecsim_sim* sim);
int wecsim_sim_body_count(const wecsim_sim* sim);

/* Free-surface elevation at station x, relative to the still level. */
int wecsim_sim_gauge(const wecsim_sim* sim, double x, double* eta);

/* Heave state of one body: offset from equilibrium, velocity, damping. Any
 * output pointer may be null. */
int wecsim_sim_body_state(const wecsim_sim* sim, int body, double* dz,
                          double* vz, double* kp);

/* Retune one body's PTO damping (takes effect immediately). */
int wecsim_sim_set_kp(wecsim_sim* sim, int body, double kp);

/* Accumulated PTO energy and latest midpoint power of one body. */
int wecsim_sim_pto(const wecsim_sim* sim, int body, double* energy,
                   double* power);

/* ---- whole-run commands (the CLI is a thin shell over these) -------- */
/* Common arguments: config_path (JSON file), out_dir (created if missing),
 * seed_override (0 keeps the config seed), fixed_dt (> 0 forces a constant
 * step), dim_override (0 keeps the config dimension). */

int wecsim_cmd_simulate(const char* config_path, const char* out_dir,
                        uint64_t seed_override, double fixed_dt,
                        int dim_override);

int wecsim_cmd_sweep(const char* config_path, const char* out_dir,
                     const double* kps, size_t n_kp, uint64_t seed_override,
                     double fixed_dt, int dim_override);

int wecsim_cmd_train(const char* config_path, const char* out_dir,
                     uint64_t seed_override, double fixed_dt,
                     int dim_override);

int wecsim_cmd_eval(const char* config_path, const char* checkpoint_path,
                    const char* out_dir, uint64_t seed_override,
                    double fixed_dt, int dim_override);

int wecsim_cmd_analyze(const char* series_csv, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* WECSIM_H */
