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

// Thin shell over the C API: argument parsing and exit codes only. All run
// logic lives behind wecsim.h.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wecsim.h"

namespace {

int finish(int status, const char* verb) {
    if (status != WECSIM_OK) {
        std::fprintf(stderr, "wecsim %s failed (%d): %s\n", verb, status,
                     wecsim_last_error());
        return status;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("wecsim ") + wecsim_version() +
                 ": wave tank simulation and adaptive PTO training"};
    app.require_subcommand(1);

    std::string config, out = "out", checkpoint, series;
    std::uint64_t seed = 0; // 0 keeps the config seed
    double fixed_dt = 0.0;
    int dim = 0;
    std::vector<double> kps = {200, 450, 700, 950, 1200, 1500, 1800};

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* c = cmd->add_option("--config", config, "JSON run configuration");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", out, "output directory (default: out)");
        cmd->add_option("--seed", seed, "override the config RNG seed");
        cmd->add_option("--fixed-dt", fixed_dt,
                        "constant step size, regression mode");
        cmd->add_option("--dim", dim, "override tank dimension")
            ->check(CLI::IsMember({2, 3}));
    };

    auto* simulate =
        app.add_subcommand("simulate", "plain tank run at constant damping");
    add_common(simulate, true);

    auto* sweep = app.add_subcommand(
        "sweep", "average absorbed power over a list of damping values");
    add_common(sweep, true);
    sweep->add_option("--kp", kps, "damping values to sweep")->delimiter(',');

    auto* train = app.add_subcommand(
        "train", "episodic PTO-damping training with periodic checkpoints");
    add_common(train, true);

    auto* eval = app.add_subcommand(
        "eval", "deterministic paired evaluation against the constant baseline");
    add_common(eval, true);
    eval->add_option("--checkpoint", checkpoint, "trained checkpoint")
        ->required()
        ->check(CLI::ExistingFile);

    auto* analyze = app.add_subcommand(
        "analyze", "spectral and statistics pass over a gauge CSV");
    analyze->add_option("--series", series, "gauge time series CSV")
        ->required()
        ->check(CLI::ExistingFile);
    analyze->add_option("--out", out, "output directory (default: out)");

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed())
        return finish(wecsim_cmd_simulate(config.c_str(), out.c_str(), seed,
                                          fixed_dt, dim),
                      "simulate");
    if (sweep->parsed())
        return finish(wecsim_cmd_sweep(config.c_str(), out.c_str(), kps.data(),
                                       kps.size(), seed, fixed_dt, dim),
                      "sweep");
    if (train->parsed())
        return finish(wecsim_cmd_train(config.c_str(), out.c_str(), seed,
                                       fixed_dt, dim),
                      "train");
    if (eval->parsed())
        return finish(wecsim_cmd_eval(config.c_str(), checkpoint.c_str(),
                                      out.c_str(), seed, fixed_dt, dim),
                      "eval");
    if (analyze->parsed())
        return finish(wecsim_cmd_analyze(series.c_str(), out.c_str()),
                      "analyze");
    return 1;
}
