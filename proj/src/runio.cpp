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

#include "wec/runio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "wec/simulation.hpp"
#include "wec/spectral.hpp"

namespace wec {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad_key(const std::string& path) {
    fail(ErrorCode::Config, "unknown key: " + path);
}

double num_at(const ojson& v, const std::string& path) {
    if (!v.is_number())
        fail(ErrorCode::Config, path + " must be a number");
    return v.get<double>();
}

int int_at(const ojson& v, const std::string& path) {
    if (!v.is_number_integer())
        fail(ErrorCode::Config, path + " must be an integer");
    return v.get<int>();
}

std::uint64_t uint_at(const ojson& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        fail(ErrorCode::Config, path + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

const ojson& object_at(const ojson& v, const std::string& path) {
    if (!v.is_object())
        fail(ErrorCode::Config, path + " must be an object");
    return v;
}

const char* kind_name(WaveKind k) {
    switch (k) {
        case WaveKind::None: return "none";
        case WaveKind::Regular: return "regular";
        case WaveKind::Irregular: return "irregular";
    }
    return "regular";
}

WaveKind kind_parse(const ojson& v, const std::string& path) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "none") return WaveKind::None;
        if (s == "regular") return WaveKind::Regular;
        if (s == "irregular") return WaveKind::Irregular;
    }
    fail(ErrorCode::Config,
         path + " must be one of \"none\", \"regular\", \"irregular\"");
}

void parse_tank(const ojson& j, SceneSpec& s) {
    for (const auto& [k, v] : object_at(j, "tank").items()) {
        const std::string p = "tank." + k;
        if (k == "dim") s.dim = int_at(v, p);
        else if (k == "length") s.length = num_at(v, p);
        else if (k == "breadth") s.breadth = num_at(v, p);
        else if (k == "depth") s.depth = num_at(v, p);
        else if (k == "dp") s.dp = num_at(v, p);
        else if (k == "freeboard") s.freeboard = num_at(v, p);
        else if (k == "damping_length") s.damping_length = num_at(v, p);
        else bad_key(p);
    }
}

void parse_waves(const ojson& j, SceneSpec& s) {
    for (const auto& [k, v] : object_at(j, "waves").items()) {
        const std::string p = "waves." + k;
        if (k == "kind") s.wave_kind = kind_parse(v, p);
        else if (k == "height") s.wave_height = num_at(v, p);
        else if (k == "period") s.wave_period = num_at(v, p);
        else if (k == "hs") s.hs = num_at(v, p);
        else if (k == "tp") s.tp = num_at(v, p);
        else if (k == "components") s.n_components = int_at(v, p);
        else if (k == "peak_gamma") s.gamma_s = num_at(v, p);
        else if (k == "seed") s.wave_seed = uint_at(v, p);
        else bad_key(p);
    }
}

void parse_bodies(const ojson& j, BodyRow& b) {
    for (const auto& [k, v] : object_at(j, "bodies").items()) {
        const std::string p = "bodies." + k;
        if (k == "count") b.count = int_at(v, p);
        else if (k == "first_xc") b.first_xc = num_at(v, p);
        else if (k == "spacing") b.spacing = num_at(v, p);
        else if (k == "width") b.width = num_at(v, p);
        else if (k == "height") b.height = num_at(v, p);
        else if (k == "draft") b.draft = num_at(v, p);
        else if (k == "k_base") b.k_base = num_at(v, p);
        else if (k == "gauge_near") b.gauge_near = num_at(v, p);
        else if (k == "gauge_far") b.gauge_far = num_at(v, p);
        else bad_key(p);
    }
}

void parse_rl(const ojson& j, RunConfig& cfg) {
    for (const auto& [k, v] : object_at(j, "rl").items()) {
        const std::string p = "rl." + k;
        if (k == "hidden") {
            if (!v.is_array() || v.empty())
                fail(ErrorCode::Config, p + " must be a non-empty array");
            cfg.rl.hidden.clear();
            for (const auto& h : v) cfg.rl.hidden.push_back(int_at(h, p));
        } else if (k == "gamma") cfg.rl.gamma = num_at(v, p);
        else if (k == "tau") cfg.rl.tau = num_at(v, p);
        else if (k == "lr") cfg.rl.lr = num_at(v, p);
        else if (k == "alpha_lr") cfg.rl.alpha_lr = num_at(v, p);
        else if (k == "alpha_init") cfg.rl.alpha_init = num_at(v, p);
        else if (k == "entropy_target") cfg.rl.h_target = num_at(v, p);
        else if (k == "batch") cfg.rl.batch = int_at(v, p);
        else if (k == "replay") cfg.rl.replay_capacity = uint_at(v, p);
        else if (k == "min_fill") cfg.rl.min_fill = uint_at(v, p);
        else if (k == "dt_ctrl") cfg.control.dt_ctrl = num_at(v, p);
        else if (k == "gamma_p") cfg.control.gamma_p = num_at(v, p);
        else if (k == "dk_frac") cfg.control.dk_frac = num_at(v, p);
        else bad_key(p);
    }
}

void parse_episodes(const ojson& j, ControlConfig& c) {
    for (const auto& [k, v] : object_at(j, "episodes").items()) {
        const std::string p = "episodes." + k;
        if (k == "count") c.episodes = int_at(v, p);
        else if (k == "span") c.episode_span = num_at(v, p);
        else if (k == "settle") c.settle_time = num_at(v, p);
        else if (k == "warmup") c.warmup_episodes = int_at(v, p);
        else if (k == "eval") c.eval_episodes = int_at(v, p);
        else bad_key(p);
    }
}

void parse_outputs(const ojson& j, OutputConfig& o) {
    for (const auto& [k, v] : object_at(j, "outputs").items()) {
        const std::string p = "outputs." + k;
        if (k == "gauge_xs") {
            if (!v.is_array())
                fail(ErrorCode::Config, p + " must be an array");
            o.gauge_xs.clear();
            for (const auto& x : v) o.gauge_xs.push_back(num_at(x, p));
        } else if (k == "cadence") o.cadence = num_at(v, p);
        else if (k == "duration") o.duration = num_at(v, p);
        else if (k == "checkpoint_every") o.checkpoint_every = int_at(v, p);
        else bad_key(p);
    }
}

void check(bool cond, const std::string& key, const std::string& what) {
    require(cond, ErrorCode::Config, "config: " + key + " " + what);
}

void validate(const RunConfig& cfg) {
    const SceneSpec& s = cfg.scene;
    check(s.dim == 2 || s.dim == 3, "tank.dim", "must be 2 or 3");
    check(s.length > 0, "tank.length", "must be positive");
    check(s.depth > 0, "tank.depth", "must be positive");
    check(s.dp > 0, "tank.dp", "must be positive");
    check(s.dp < s.depth, "tank.dp", "must be smaller than the depth");
    check(s.freeboard > 0, "tank.freeboard", "must be positive");
    check(s.breadth >= 0, "tank.breadth", "must be non-negative");
    if (s.dim == 3)
        check(s.breadth > 0, "tank.breadth", "must be positive in 3-D");
    check(s.damping_length >= 0, "tank.damping_length", "must be non-negative");
    check(s.damping_length < s.length, "tank.damping_length",
          "must be shorter than the tank");

    if (s.wave_kind == WaveKind::Regular) {
        check(s.wave_height >= 0, "waves.height", "must be non-negative");
        check(s.wave_period > 0, "waves.period", "must be positive");
    } else if (s.wave_kind == WaveKind::Irregular) {
        check(s.hs > 0, "waves.hs", "must be positive");
        check(s.tp > 0, "waves.tp", "must be positive");
        check(s.n_components >= 1, "waves.components", "must be at least 1");
        check(s.gamma_s >= 1, "waves.peak_gamma", "must be at least 1");
    }

    const BodyRow& b = cfg.bodies;
    check(b.count >= 0, "bodies.count", "must be non-negative");
    if (b.count > 0) {
        check(b.width > 0, "bodies.width", "must be positive");
        check(b.height > 0, "bodies.height", "must be positive");
        check(b.draft > 0, "bodies.draft", "must be positive");
        check(b.draft <= b.height, "bodies.draft",
              "must not exceed the body height");
        check(b.draft < s.depth, "bodies.draft",
              "must be smaller than the depth");
        check(b.k_base >= 0, "bodies.k_base", "must be non-negative");
        check(b.gauge_near > 0, "bodies.gauge_near", "must be positive");
        check(b.gauge_far > b.gauge_near, "bodies.gauge_far",
              "must exceed gauge_near");
        if (b.count > 1)
            check(b.spacing > 0, "bodies.spacing", "must be positive");
        const double reach = 0.5 * b.width + b.gauge_far;
        check(b.first_xc - reach > 0, "bodies.first_xc",
              "leaves no water before the first gauge");
        const double last_xc = b.first_xc + (b.count - 1) * b.spacing;
        check(last_xc + reach < s.length, "bodies.first_xc",
              "pushes the last gauge outside the tank");
    }

    const MasacSpec& m = cfg.rl;
    for (int h : m.hidden)
        check(h >= 1, "rl.hidden", "entries must be positive");
    check(m.gamma > 0 && m.gamma <= 1, "rl.gamma", "must lie in (0, 1]");
    check(m.tau >= 0 && m.tau <= 1, "rl.tau", "must lie in [0, 1]");
    check(m.lr > 0, "rl.lr", "must be positive");
    check(m.alpha_lr > 0, "rl.alpha_lr", "must be positive");
    check(m.alpha_init > 0, "rl.alpha_init", "must be positive");
    check(m.batch >= 1, "rl.batch", "must be at least 1");
    check(m.replay_capacity >= std::size_t(m.batch), "rl.replay",
          "must hold at least one batch");
    check(m.min_fill >= std::size_t(m.batch), "rl.min_fill",
          "must be at least the batch size");
    check(m.min_fill <= m.replay_capacity, "rl.min_fill",
          "must not exceed the replay capacity");

    const ControlConfig& c = cfg.control;
    check(c.dt_ctrl > 0, "rl.dt_ctrl", "must be positive");
    check(c.gamma_p >= 0 && c.gamma_p <= 1, "rl.gamma_p",
          "must lie in [0, 1]");
    check(c.dk_frac > 0 && c.dk_frac <= 1, "rl.dk_frac",
          "must lie in (0, 1]");
    check(c.episodes >= 0, "episodes.count", "must be non-negative");
    check(c.episode_span > 0, "episodes.span", "must be positive");
    check(c.episode_span >= c.dt_ctrl, "episodes.span",
          "must cover at least one control interval");
    check(c.settle_time >= 0, "episodes.settle", "must be non-negative");
    check(c.warmup_episodes >= 0, "episodes.warmup", "must be non-negative");
    check(c.eval_episodes >= 1, "episodes.eval", "must be at least 1");

    const OutputConfig& o = cfg.outputs;
    check(o.cadence > 0, "outputs.cadence", "must be positive");
    check(o.duration > 0, "outputs.duration", "must be positive");
    check(o.checkpoint_every >= 1, "outputs.checkpoint_every",
          "must be at least 1");
    for (double x : o.gauge_xs)
        check(x > 0 && x < s.length, "outputs.gauge_xs",
              "stations must lie inside the tank");
    check(cfg.fixed_dt >= 0, "fixed_dt", "must be non-negative");
}

// copy the body-row scalars into the control block and expand the body line
void finalize(RunConfig& cfg) {
    cfg.control.k_base = cfg.bodies.k_base;
    cfg.control.gauge_near = cfg.bodies.gauge_near;
    cfg.control.gauge_far = cfg.bodies.gauge_far;
    cfg.scene.bodies.clear();
    for (int i = 0; i < cfg.bodies.count; ++i) {
        BodySpec bs;
        bs.xc = cfg.bodies.first_xc + i * cfg.bodies.spacing;
        bs.width = cfg.bodies.width;
        bs.height = cfg.bodies.height;
        bs.draft = cfg.bodies.draft;
        bs.kp = cfg.bodies.k_base;
        cfg.scene.bodies.push_back(bs);
    }
    cfg.rl.n_agents = cfg.bodies.count;
    cfg.rl.obs_dim = kObsWidth;
    cfg.rl.act_dim = 1;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

} // namespace

RunConfig parse_config_text(const std::string& json_text) {
    RunConfig cfg;
    ojson doc;
    if (trim(json_text).empty()) {
        doc = ojson::object();
    } else {
        try {
            doc = ojson::parse(json_text);
        } catch (const std::exception& e) {
            fail(ErrorCode::Config, std::string("config parse: ") + e.what());
        }
    }
    if (!doc.is_object())
        fail(ErrorCode::Config, "config root must be an object");
    for (const auto& [k, v] : doc.items()) {
        if (k == "seed") cfg.seed = uint_at(v, "seed");
        else if (k == "fixed_dt") cfg.fixed_dt = num_at(v, "fixed_dt");
        else if (k == "tank") parse_tank(v, cfg.scene);
        else if (k == "waves") parse_waves(v, cfg.scene);
        else if (k == "bodies") parse_bodies(v, cfg.bodies);
        else if (k == "rl") parse_rl(v, cfg);
        else if (k == "episodes") parse_episodes(v, cfg.control);
        else if (k == "outputs") parse_outputs(v, cfg.outputs);
        else bad_key(k);
    }
    finalize(cfg);
    validate(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::Io, "cannot read config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    const SceneSpec& s = cfg.scene;
    ojson doc;
    doc["seed"] = cfg.seed;
    doc["fixed_dt"] = cfg.fixed_dt;
    doc["tank"] = {{"dim", s.dim},
                   {"length", s.length},
                   {"breadth", s.breadth},
                   {"depth", s.depth},
                   {"dp", s.dp},
                   {"freeboard", s.freeboard},
                   {"damping_length", s.damping_length}};
    doc["waves"] = {{"kind", kind_name(s.wave_kind)},
                    {"height", s.wave_height},
                    {"period", s.wave_period},
                    {"hs", s.hs},
                    {"tp", s.tp},
                    {"components", s.n_components},
                    {"peak_gamma", s.gamma_s},
                    {"seed", s.wave_seed}};
    doc["bodies"] = {{"count", cfg.bodies.count},
                     {"first_xc", cfg.bodies.first_xc},
                     {"spacing", cfg.bodies.spacing},
                     {"width", cfg.bodies.width},
                     {"height", cfg.bodies.height},
                     {"draft", cfg.bodies.draft},
                     {"k_base", cfg.bodies.k_base},
                     {"gauge_near", cfg.bodies.gauge_near},
                     {"gauge_far", cfg.bodies.gauge_far}};
    doc["rl"] = {{"hidden", cfg.rl.hidden},
                 {"gamma", cfg.rl.gamma},
                 {"tau", cfg.rl.tau},
                 {"lr", cfg.rl.lr},
                 {"alpha_lr", cfg.rl.alpha_lr},
                 {"alpha_init", cfg.rl.alpha_init},
                 {"entropy_target", cfg.rl.h_target},
                 {"batch", cfg.rl.batch},
                 {"replay", cfg.rl.replay_capacity},
                 {"min_fill", cfg.rl.min_fill},
                 {"dt_ctrl", cfg.control.dt_ctrl},
                 {"gamma_p", cfg.control.gamma_p},
                 {"dk_frac", cfg.control.dk_frac}};
    doc["episodes"] = {{"count", cfg.control.episodes},
                       {"span", cfg.control.episode_span},
                       {"settle", cfg.control.settle_time},
                       {"warmup", cfg.control.warmup_episodes},
                       {"eval", cfg.control.eval_episodes}};
    doc["outputs"] = {{"gauge_xs", cfg.outputs.gauge_xs},
                      {"cadence", cfg.outputs.cadence},
                      {"duration", cfg.outputs.duration},
                      {"checkpoint_every", cfg.outputs.checkpoint_every}};
    return doc.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& cfg) {
    return fnv1a64(serialize_config(cfg));
}

std::string file_header(const RunConfig& cfg) {
    return std::string("# wecsim ") + kVersion + " config=" +
           to_hex(config_hash(cfg)) + " seed=" + std::to_string(cfg.seed);
}

EnergyReport EnergyReport::make(const std::vector<double>& e_drl,
                                const std::vector<double>& e_base) {
    require(e_drl.size() == e_base.size(), ErrorCode::InvalidArgument,
            "energy report needs one baseline entry per agent");
    EnergyReport rep;
    for (std::size_t i = 0; i < e_drl.size(); ++i) {
        Row r;
        r.e_drl = e_drl[i];
        r.e_base = e_base[i];
        r.delta = r.e_drl - r.e_base;
        r.improvement = r.e_base != 0.0 ? r.delta / r.e_base : 0.0;
        rep.total.e_drl += r.e_drl;
        rep.total.e_base += r.e_base;
        rep.total.delta += r.delta;
        rep.agents.push_back(r);
    }
    rep.total.improvement =
        rep.total.e_base != 0.0 ? rep.total.delta / rep.total.e_base : 0.0;
    return rep;
}

// --- gauge CSV reading + analysis ---

namespace {

struct SeriesTable {
    std::string first_line; // passed through to outputs when it is a header
    std::vector<std::string> labels;
    std::vector<double> t;
    std::vector<std::vector<double>> cols;
    double dt = 0.0;
};

SeriesTable read_series_csv(const std::string& path, double min_duration) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::Io, "cannot read series: " + path);
    SeriesTable tab;
    std::string line;
    bool saw_first = false, saw_labels = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!saw_first) {
            tab.first_line = line;
            saw_first = true;
        }
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(trim(f));
        if (!saw_labels) {
            require(fields.size() >= 2 && fields[0] == "t", ErrorCode::InvalidArgument,
                    "malformed series: first column must be t (" + path + ")");
            tab.labels.assign(fields.begin() + 1, fields.end());
            tab.cols.resize(tab.labels.size());
            saw_labels = true;
            continue;
        }
        require(fields.size() == tab.labels.size() + 1, ErrorCode::InvalidArgument,
                "malformed series: ragged row at line " + std::to_string(lineno));
        std::vector<double> row;
        for (const auto& s : fields) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(s, &used));
                require(used == s.size(), ErrorCode::InvalidArgument, "");
            } catch (...) {
                fail(ErrorCode::InvalidArgument,
                     "malformed series: non-numeric field at line " +
                         std::to_string(lineno));
            }
        }
        tab.t.push_back(row[0]);
        for (std::size_t c = 0; c < tab.cols.size(); ++c)
            tab.cols[c].push_back(row[c + 1]);
    }
    require(tab.t.size() >= 2, ErrorCode::InvalidArgument,
            "malformed series: need at least two samples (" + path + ")");
    tab.dt = tab.t[1] - tab.t[0];
    require(tab.dt > 0, ErrorCode::InvalidArgument,
            "malformed series: time must increase");
    for (std::size_t i = 1; i + 1 < tab.t.size(); ++i)
        require(std::abs(tab.t[i + 1] - tab.t[i] - tab.dt) <= 1e-3 * tab.dt,
                ErrorCode::InvalidArgument,
                "series is not uniformly sampled near t = " +
                    std::to_string(tab.t[i]));
    const double span = tab.t.back() - tab.t.front();
    require(span >= min_duration, ErrorCode::InvalidArgument,
            "series too short for spectral claims: " + std::to_string(span) +
                " s of " + std::to_string(min_duration) + " s needed");
    return tab;
}

SeriesAnalysis analyze_column(const std::string& label,
                              const std::vector<double>& x, double dt) {
    SeriesAnalysis a;
    a.label = label;
    a.min = a.max = x[0];
    for (double v : x) {
        a.mean += v;
        a.min = std::min(a.min, v);
        a.max = std::max(a.max, v);
    }
    a.mean /= double(x.size());
    for (double v : x) a.sd += (v - a.mean) * (v - a.mean);
    a.sd = std::sqrt(a.sd / double(x.size()));
    const PsdEstimate est = welch_psd(x, dt);
    a.hs = significant_height(est);
    a.tp = peak_period(est);
    return a;
}

} // namespace

std::vector<SeriesAnalysis> analyze_series_csv(const std::string& path,
                                               double min_duration) {
    const SeriesTable tab = read_series_csv(path, min_duration);
    require(tab.t.size() >= 512, ErrorCode::InvalidArgument,
            "series too short: the estimator needs 512 uniform samples");
    std::vector<SeriesAnalysis> out;
    for (std::size_t c = 0; c < tab.cols.size(); ++c)
        out.push_back(analyze_column(tab.labels[c], tab.cols[c], tab.dt));
    return out;
}

// --- subcommand bodies ---

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    require(out.good(), ErrorCode::Io, "cannot write: " + p.string());
    out.precision(12);
    return out;
}

void write_config_echo(const RunConfig& cfg, const std::string& out_dir) {
    auto out = open_out(fs::path(out_dir) / "config_resolved.json");
    out << serialize_config(cfg);
}

void write_runtime(const RunConfig& cfg, const std::string& out_dir,
                   const RuntimeReport& r) {
    auto out = open_out(fs::path(out_dir) / "runtime.csv");
    out << file_header(cfg) << "\nmetric,value\n";
    out << "sph_s," << r.sph_s << "\n";
    out << "rl_s," << r.rl_s << "\n";
    out << "io_s," << r.io_s << "\n";
    out << "total_s," << r.total_s << "\n";
    out << "particles," << r.particles << "\n";
    out << "steps," << r.steps << "\n";
}

// fixed_dt > 0 steps at a constant pace for regression runs; otherwise the
// adaptive stepper lands on the target exactly
void advance(Simulation& sim, double t_target, double fixed_dt) {
    if (fixed_dt > 0) {
        while (sim.time() < t_target - 1e-12) sim.step(fixed_dt);
    } else {
        sim.advance_to(t_target);
    }
}

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

void cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    PhaseTimers tm;
    tm.start_total();
    RuntimeReport rep;

    tm.start(PhaseTimers::Sph);
    Simulation sim(cfg.scene, cfg.seed);
    sim.params.reuse_half_step_neighbors = true;
    tm.stop(PhaseTimers::Sph);
    {
        PhaseScope io(tm, PhaseTimers::Io);
        write_config_echo(cfg, out_dir);
    }

    const std::size_t nb = sim.bodies().size();
    std::vector<std::vector<double>> gauge_rows, body_rows;
    const int samples = int(cfg.outputs.duration / cfg.outputs.cadence + 0.5);
    for (int s = 0; s <= samples; ++s) {
        const double t = s * cfg.outputs.cadence;
        if (t > 0) {
            PhaseScope sph(tm, PhaseTimers::Sph);
            advance(sim, t, cfg.fixed_dt);
        }
        PhaseScope io(tm, PhaseTimers::Io);
        std::vector<double> g{sim.time()};
        for (double x : cfg.outputs.gauge_xs) g.push_back(sim.gauge(x));
        gauge_rows.push_back(std::move(g));
        std::vector<double> b{sim.time()};
        for (std::size_t i = 0; i < nb; ++i) {
            const auto& st = sim.bodies()[i].state;
            b.push_back(st.r0z - st.z0);
            b.push_back(st.vz);
            b.push_back(st.kp);
            b.push_back(sim.pto_power(i));
        }
        body_rows.push_back(std::move(b));
    }

    {
        PhaseScope io(tm, PhaseTimers::Io);
        auto gout = open_out(fs::path(out_dir) / "gauges.csv");
        gout << file_header(cfg) << "\nt";
        for (double x : cfg.outputs.gauge_xs) gout << ",eta_" << fmt_num(x);
        gout << "\n";
        for (const auto& row : gauge_rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                gout << (i ? "," : "") << row[i];
            gout << "\n";
        }
        auto bout = open_out(fs::path(out_dir) / "bodies.csv");
        bout << file_header(cfg) << "\nt";
        for (std::size_t i = 0; i < nb; ++i)
            bout << ",dz" << i << ",vz" << i << ",kp" << i << ",power" << i;
        bout << "\n";
        for (const auto& row : body_rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                bout << (i ? "," : "") << row[i];
            bout << "\n";
        }
    }

    tm.stop_total();
    rep.sph_s = tm.seconds(PhaseTimers::Sph);
    rep.rl_s = tm.seconds(PhaseTimers::Rl);
    rep.io_s = tm.seconds(PhaseTimers::Io);
    rep.total_s = tm.total_seconds();
    rep.particles = sim.particles().count();
    rep.steps = sim.steps();
    write_runtime(cfg, out_dir, rep);
}

void cmd_sweep(const RunConfig& cfg, const std::vector<double>& kps,
               const std::string& out_dir) {
    require(!kps.empty(), ErrorCode::InvalidArgument,
            "sweep needs at least one kp value");
    require(cfg.outputs.duration > cfg.control.settle_time,
            ErrorCode::Config,
            "config: outputs.duration must exceed episodes.settle for a sweep");
    require(!cfg.scene.bodies.empty(), ErrorCode::Config,
            "config: bodies.count must be positive for a sweep");
    fs::create_directories(out_dir);
    PhaseTimers tm;
    tm.start_total();
    RuntimeReport rep;
    {
        PhaseScope io(tm, PhaseTimers::Io);
        write_config_echo(cfg, out_dir);
    }

    const double t0 = cfg.control.settle_time;
    const double t1 = cfg.outputs.duration;
    std::vector<std::vector<double>> rows;
    for (double kp : kps) {
        SceneSpec scene = cfg.scene;
        for (auto& b : scene.bodies) b.kp = kp;
        PhaseScope sph(tm, PhaseTimers::Sph);
        Simulation sim(scene, cfg.seed);
        sim.params.reuse_half_step_neighbors = true;
        advance(sim, t0, cfg.fixed_dt);
        std::vector<double> e0;
        for (std::size_t i = 0; i < sim.bodies().size(); ++i)
            e0.push_back(sim.pto_energy(i));
        advance(sim, t1, cfg.fixed_dt);
        std::vector<double> row{kp, 0.0};
        for (std::size_t i = 0; i < sim.bodies().size(); ++i) {
            const double p = (sim.pto_energy(i) - e0[i]) / (t1 - t0);
            row.push_back(p);
            row[1] += p;
        }
        rows.push_back(std::move(row));
        rep.particles = sim.particles().count();
        rep.steps += sim.steps();
    }

    {
        PhaseScope io(tm, PhaseTimers::Io);
        auto out = open_out(fs::path(out_dir) / "sweep.csv");
        out << file_header(cfg) << "\nkp,p_total";
        for (std::size_t i = 0; i < cfg.scene.bodies.size(); ++i)
            out << ",p_body" << i;
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << row[i];
            out << "\n";
        }
    }

    tm.stop_total();
    rep.sph_s = tm.seconds(PhaseTimers::Sph);
    rep.rl_s = tm.seconds(PhaseTimers::Rl);
    rep.io_s = tm.seconds(PhaseTimers::Io);
    rep.total_s = tm.total_seconds();
    write_runtime(cfg, out_dir, rep);
}

void cmd_train(const RunConfig& cfg, const std::string& out_dir) {
    require(!cfg.scene.bodies.empty(), ErrorCode::Config,
            "config: bodies.count must be positive for training");
    fs::create_directories(out_dir);
    PhaseTimers tm;
    tm.start_total();
    {
        PhaseScope io(tm, PhaseTimers::Io);
        write_config_echo(cfg, out_dir);
    }

    tm.start(PhaseTimers::Sph);
    Simulation sim(cfg.scene, cfg.seed);
    sim.params.reuse_half_step_neighbors = true;
    WaveTankEnv env(sim, cfg.control);
    env.prepare();
    tm.stop(PhaseTimers::Sph);
    Masac masac(cfg.rl, cfg.seed);

    auto log = open_out(fs::path(out_dir) / "train_log.csv");
    log << file_header(cfg)
        << "\nepisode,agent,return,mean_kp,alpha,critic_loss,policy_loss\n";
    auto on_episode = [&](const EpisodeLog& e) {
        PhaseScope io(tm, PhaseTimers::Io);
        for (std::size_t i = 0; i < e.returns.size(); ++i)
            log << e.episode << ',' << i << ',' << e.returns[i] << ','
                << e.mean_kp[i] << ',' << e.alpha[i] << ',' << e.critic_loss
                << ',' << e.policy_loss << "\n";
        log.flush();
        if ((e.episode + 1) % cfg.outputs.checkpoint_every == 0) {
            char name[40];
            std::snprintf(name, sizeof name, "checkpoint_ep%04d.bin",
                          e.episode + 1);
            write_file_bytes((fs::path(out_dir) / name).string(),
                             masac.save());
        }
    };
    train_agents(env, masac, nullptr, on_episode, &tm);
    {
        PhaseScope io(tm, PhaseTimers::Io);
        write_file_bytes((fs::path(out_dir) / "checkpoint.bin").string(),
                         masac.save());
    }

    tm.stop_total();
    RuntimeReport rep;
    rep.sph_s = tm.seconds(PhaseTimers::Sph);
    rep.rl_s = tm.seconds(PhaseTimers::Rl);
    rep.io_s = tm.seconds(PhaseTimers::Io);
    rep.total_s = tm.total_seconds();
    rep.particles = sim.particles().count();
    rep.steps = sim.steps();
    write_runtime(cfg, out_dir, rep);
}

void cmd_eval(const RunConfig& cfg, const std::string& checkpoint_path,
              const std::string& out_dir) {
    require(!cfg.scene.bodies.empty(), ErrorCode::Config,
            "config: bodies.count must be positive for evaluation");
    require(fs::exists(checkpoint_path), ErrorCode::Io,
            "checkpoint not found: " + checkpoint_path);
    fs::create_directories(out_dir);
    PhaseTimers tm;
    tm.start_total();
    {
        PhaseScope io(tm, PhaseTimers::Io);
        write_config_echo(cfg, out_dir);
    }

    Masac masac(cfg.rl, cfg.seed);
    {
        PhaseScope io(tm, PhaseTimers::Io);
        masac.load(read_file_bytes(checkpoint_path));
    }

    tm.start(PhaseTimers::Sph);
    Simulation sim(cfg.scene, cfg.seed);
    sim.params.reuse_half_step_neighbors = true;
    WaveTankEnv env(sim, cfg.control);
    env.prepare();
    std::vector<std::vector<double>> base_e, drl_e;
    EvalTrace trace;
    base_e = evaluate(env, nullptr);
    drl_e = evaluate(env, &masac, &trace);
    tm.stop(PhaseTimers::Sph);

    const int n = env.n_agents();
    std::vector<double> e_drl(n, 0.0), e_base(n, 0.0);
    for (const auto& ep : drl_e)
        for (int i = 0; i < n; ++i) e_drl[i] += ep[i];
    for (const auto& ep : base_e)
        for (int i = 0; i < n; ++i) e_base[i] += ep[i];
    const EnergyReport report = EnergyReport::make(e_drl, e_base);

    {
        PhaseScope io(tm, PhaseTimers::Io);
        auto out = open_out(fs::path(out_dir) / "energy_report.csv");
        out << file_header(cfg)
            << "\nagent,e_drl,e_base,delta,improvement_pct\n";
        for (std::size_t i = 0; i < report.agents.size(); ++i) {
            const auto& r = report.agents[i];
            out << i << ',' << r.e_drl << ',' << r.e_base << ',' << r.delta
                << ',' << 100 * r.improvement << "\n";
        }
        out << "total," << report.total.e_drl << ',' << report.total.e_base
            << ',' << report.total.delta << ','
            << 100 * report.total.improvement << "\n";

        auto tr = open_out(fs::path(out_dir) / "eval_trace.csv");
        tr << file_header(cfg) << "\nt";
        for (int i = 0; i < n; ++i)
            tr << ",eta_up" << i << ",eta_dn" << i << ",dz" << i << ",vz" << i
               << ",fz" << i << ",kp" << i << ",power" << i;
        tr << "\n";
        for (std::size_t s = 0; s < trace.t.size(); ++s) {
            tr << trace.t[s];
            for (int i = 0; i < n; ++i)
                tr << ',' << trace.eta_up[i][s] << ',' << trace.eta_dn[i][s]
                   << ',' << trace.dz[i][s] << ',' << trace.vz[i][s] << ','
                   << trace.fz[i][s] << ',' << trace.kp[i][s] << ','
                   << trace.power[i][s];
            tr << "\n";
        }
    }

    tm.stop_total();
    RuntimeReport rep;
    rep.sph_s = tm.seconds(PhaseTimers::Sph);
    rep.rl_s = tm.seconds(PhaseTimers::Rl);
    rep.io_s = tm.seconds(PhaseTimers::Io);
    rep.total_s = tm.total_seconds();
    rep.particles = sim.particles().count();
    rep.steps = sim.steps();
    write_runtime(cfg, out_dir, rep);
}

void cmd_analyze(const std::string& series_csv, const std::string& out_dir) {
    const SeriesTable tab = read_series_csv(series_csv, 100.0);
    require(tab.t.size() >= 512, ErrorCode::InvalidArgument,
            "series too short: the estimator needs 512 uniform samples");
    fs::create_directories(out_dir);

    const std::string header =
        tab.first_line.rfind("# wecsim", 0) == 0
            ? tab.first_line
            : std::string("# wecsim ") + kVersion + " config=none seed=0";

    std::vector<SeriesAnalysis> stats;
    std::vector<PsdEstimate> psds;
    for (std::size_t c = 0; c < tab.cols.size(); ++c) {
        stats.push_back(analyze_column(tab.labels[c], tab.cols[c], tab.dt));
        psds.push_back(welch_psd(tab.cols[c], tab.dt));
    }

    auto out = open_out(fs::path(out_dir) / "analysis.csv");
    out << header << "\nseries,mean,sd,min,max,hs,tp\n";
    for (const auto& a : stats)
        out << a.label << ',' << a.mean << ',' << a.sd << ',' << a.min << ','
            << a.max << ',' << a.hs << ',' << a.tp << "\n";

    auto sp = open_out(fs::path(out_dir) / "spectrum.csv");
    sp << header << "\nfreq";
    for (const auto& a : stats) sp << ",S_" << a.label;
    sp << "\n";
    for (std::size_t k = 0; k < psds[0].freq.size(); ++k) {
        sp << psds[0].freq[k];
        for (const auto& est : psds) sp << ',' << est.psd[k];
        sp << "\n";
    }
}

} // namespace wec
