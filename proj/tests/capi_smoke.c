/* C-compiler exercise of wecsim.h: handle lifecycle, stepping, gauges,
 * body access, and the error paths. Returns the number of failed checks. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "wecsim.h"

static int failures = 0;

#define CHECK(cond)                                                      \
    do {                                                                 \
        if (!(cond)) {                                                   \
            ++failures;                                                  \
            fprintf(stderr, "CHECK failed at %s:%d: %s\n", __FILE__,     \
                    __LINE__, #cond);                                    \
        }                                                                \
    } while (0)

static const char* tiny_tank =
    "{\n"
    "  \"tank\": {\"dim\": 2, \"length\": 1.2, \"depth\": 0.3, \"dp\": 0.04,"
    " \"freeboard\": 0.3, \"damping_length\": 0.0},\n"
    "  \"waves\": {\"kind\": \"none\"},\n"
    "  \"bodies\": {\"count\": 0},\n"
    "  \"outputs\": {\"gauge_xs\": [0.6]}\n"
    "}\n";

static const char* tiny_tank_with_body =
    "{\n"
    "  \"tank\": {\"dim\": 2, \"length\": 1.6, \"depth\": 0.3, \"dp\": 0.04,"
    " \"freeboard\": 0.3, \"damping_length\": 0.0},\n"
    "  \"waves\": {\"kind\": \"none\"},\n"
    "  \"bodies\": {\"count\": 1, \"first_xc\": 0.8, \"width\": 0.2,"
    " \"height\": 0.12, \"draft\": 0.06, \"k_base\": 20.0},\n"
    "  \"outputs\": {\"gauge_xs\": [0.4]}\n"
    "}\n";

int main(void) {
    CHECK(wecsim_version() != NULL);
    CHECK(strlen(wecsim_version()) >= 5);
    CHECK(strcmp(wecsim_last_error(), "") == 0);

    /* error paths first: they must not disturb later calls */
    wecsim_sim* sim = NULL;
    CHECK(wecsim_sim_create("/no/such/config.json", 0, &sim) == WECSIM_ERR_IO);
    CHECK(sim == NULL);
    CHECK(strlen(wecsim_last_error()) > 0);

    CHECK(wecsim_sim_create_text("{\"tank\": {\"depth\": -1.0}}", 0, &sim) ==
          WECSIM_ERR_CONFIG);
    CHECK(strstr(wecsim_last_error(), "tank.depth") != NULL);

    CHECK(wecsim_sim_create_text("{\"pistons\": 3}", 0, &sim) ==
          WECSIM_ERR_CONFIG);
    CHECK(strstr(wecsim_last_error(), "pistons") != NULL);

    CHECK(wecsim_sim_advance(NULL, 1.0) == WECSIM_ERR_ARGUMENT);

    /* a still tank: build, step, read a gauge */
    CHECK(wecsim_sim_create_text(tiny_tank, 0, &sim) == WECSIM_OK);
    CHECK(sim != NULL);
    CHECK(strcmp(wecsim_last_error(), "") == 0);
    CHECK(wecsim_sim_particles(sim) > 100);
    CHECK(wecsim_sim_body_count(sim) == 0);
    CHECK(wecsim_sim_time(sim) == 0.0);

    double dt = 0.0;
    CHECK(wecsim_sim_step(sim, 0.0, &dt) == WECSIM_OK);
    CHECK(dt > 0.0 && dt < 0.1);
    CHECK(wecsim_sim_advance(sim, 0.05) == WECSIM_OK);
    CHECK(fabs(wecsim_sim_time(sim) - 0.05) < 1e-12);

    double eta = 1.0;
    CHECK(wecsim_sim_gauge(sim, 0.6, &eta) == WECSIM_OK);
    CHECK(fabs(eta) < 0.01); /* still water stays near the still level */
    CHECK(wecsim_sim_body_state(sim, 0, NULL, NULL, NULL) ==
          WECSIM_ERR_ARGUMENT); /* no bodies in this tank */
    wecsim_sim_destroy(sim);
    sim = NULL;

    /* a floating body: state access and PTO retuning */
    CHECK(wecsim_sim_create_text(tiny_tank_with_body, 42, &sim) == WECSIM_OK);
    CHECK(wecsim_sim_body_count(sim) == 1);
    CHECK(wecsim_sim_advance(sim, 0.05) == WECSIM_OK);

    double dz = 1e9, vz = 1e9, kp = 0.0;
    CHECK(wecsim_sim_body_state(sim, 0, &dz, &vz, &kp) == WECSIM_OK);
    CHECK(fabs(dz) < 0.05);
    CHECK(fabs(vz) < 1.0);
    CHECK(kp == 20.0);

    CHECK(wecsim_sim_set_kp(sim, 0, 35.0) == WECSIM_OK);
    CHECK(wecsim_sim_body_state(sim, 0, NULL, NULL, &kp) == WECSIM_OK);
    CHECK(kp == 35.0);
    CHECK(wecsim_sim_set_kp(sim, 0, -5.0) == WECSIM_ERR_ARGUMENT);
    CHECK(wecsim_sim_set_kp(sim, 3, 10.0) == WECSIM_ERR_ARGUMENT);

    double energy = -1.0, power = -1.0;
    CHECK(wecsim_sim_pto(sim, 0, &energy, &power) == WECSIM_OK);
    CHECK(energy >= 0.0);
    CHECK(power >= 0.0);
    CHECK(wecsim_sim_pto(sim, 1, &energy, &power) == WECSIM_ERR_ARGUMENT);

    wecsim_sim_destroy(sim);
    wecsim_sim_destroy(NULL); /* must be a no-op */

    /* analyze: named error for a malformed series */
    CHECK(wecsim_cmd_analyze("/no/such/series.csv", "/tmp/wecsim_capi_out") ==
          WECSIM_ERR_IO);
    CHECK(wecsim_cmd_analyze(NULL, "/tmp/wecsim_capi_out") ==
          WECSIM_ERR_ARGUMENT);

    if (failures == 0) printf("capi_smoke: all checks passed\n");
    return failures;
}
