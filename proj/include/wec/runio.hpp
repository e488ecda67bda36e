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
#include <iosfwd>
#include <string>
#include <vector>

#include "wec/env.hpp"
#include "wec/masac.hpp"
#include "wec/scene.hpp"
#include "wec/util.hpp"

namespace wec {

// Identical point absorbers placed on a line; expanded into SceneSpec.bodies.
struct BodyRow {
    int count = 1;
    double first_xc = 6.0;
    double spacing = 1.0;   // centre-to-centre along the tank
    double width = 0.5;
    double height = 0.22;
    double draft = 0.112;
    double k_base = 700.0;
    double gauge_near = 0.1; // gauge offsets outboard of the hull edge
    double gauge_far = 0.2;
};

struct OutputConfig {
    std::vector<double> gauge_xs = {6.0}; // fixed stations for `simulate`
    double cadence = 0.05;                // sampling interval, seconds
    double duration = 30.0;               // simulate / sweep run length
    int checkpoint_every = 10;            // episodes between train checkpoints
};

// The full run document. Defaults reproduce the reference 2-D tank: 12 m by
// 1.1 m depth at dp = 0.02, one 0.5 x 0.22 m floater drafted 0.112 m,
// regular waves H = 0.16 m, T = 1.5 s, k_base = 700.
struct RunConfig {
    std::uint64_t seed = 1;
    double fixed_dt = 0.0;  // > 0: constant step (regression mode)
    SceneSpec scene;        // tank + waves; bodies filled from `bodies`
    BodyRow bodies;
    ControlConfig control;  // rl loop + episode protocol
    MasacSpec rl;           // trainer hyperparameters; n_agents/obs/act derived
    OutputConfig outputs;
};

// Strict parse: unknown keys are rejected by dotted path, constraint
// violations name the key. Empty input resolves to the full default config.
RunConfig parse_config_text(const std::string& json_text);
RunConfig parse_config(const std::string& path);

// Canonical serialisation: fixed key order, 2-space indent. parse(serialise)
// is the identity on resolved configs.
std::string serialize_config(const RunConfig& cfg);

// FNV-1a over the canonical serialisation.
std::uint64_t config_hash(const RunConfig& cfg);

// First line of every output file: artifact version, config hash, seed.
std::string file_header(const RunConfig& cfg);

// Per-agent accumulated energies against the constant-damping baseline.
struct EnergyReport {
    struct Row {
        double e_drl = 0.0;
        double e_base = 0.0;
        double delta = 0.0;       // e_drl - e_base
        double improvement = 0.0; // delta / e_base
    };
    std::vector<Row> agents;
    Row total; // exact sums of the rows

    static EnergyReport make(const std::vector<double>& e_drl,
                             const std::vector<double>& e_base);
};

struct RuntimeReport {
    double sph_s = 0.0;
    double rl_s = 0.0;
    double io_s = 0.0;
    double total_s = 0.0;
    std::size_t particles = 0;
    std::uint64_t steps = 0;
};

// Spectral + statistics pass over one gauge column.
struct SeriesAnalysis {
    std::string label;
    double mean = 0.0, sd = 0.0, min = 0.0, max = 0.0;
    double hs = 0.0; // 4 sqrt(m0)
    double tp = 0.0; // 1 / argmax_f S(f)
};

// Gauge CSV in, one analysis per column. Requires uniform sampling and at
// least `min_duration` seconds of record.
std::vector<SeriesAnalysis> analyze_series_csv(const std::string& path,
                                               double min_duration = 100.0);

// Subcommand bodies. Each writes its CSVs plus config_resolved.json and
// runtime.csv under out_dir, creating the directory if needed.
void cmd_simulate(const RunConfig& cfg, const std::string& out_dir);
void cmd_sweep(const RunConfig& cfg, const std::vector<double>& kps,
               const std::string& out_dir);
void cmd_train(const RunConfig& cfg, const std::string& out_dir);
void cmd_eval(const RunConfig& cfg, const std::string& checkpoint_path,
              const std::string& out_dir);
void cmd_analyze(const std::string& series_csv, const std::string& out_dir);

} // namespace wec
