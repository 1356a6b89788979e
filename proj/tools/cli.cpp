// SPDX-License-Identifier: Apache-2.0
//
// guardbeam - mmWave guard-beam blockage prediction toolkit
// Copyright (C) 2026 The guardbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli.hpp"

#include "guardbeam/config.hpp"
#include "guardbeam/error.hpp"
#include "guardbeam/textio.hpp"
#include "guardbeam/trace.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace guardbeam::cli
{

namespace
{
namespace fs = std::filesystem;

struct Globals
{
    std::string config;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::string out;
};

class Diagnostics
{
public:
    explicit Diagnostics(const Streams &io) : io_(io) {}
    void warning(const std::string &msg) const { emit("warning", "\033[33m", msg); }
    void error(const std::string &msg) const { emit("error", "\033[31m", msg); }

private:
    void emit(const char *label, const char *ansi, const std::string &msg) const
    {
        if (io_.color)
            io_.err << ansi << label << ":\033[0m " << msg << '\n';
        else
            io_.err << label << ": " << msg << '\n';
    }
    const Streams &io_;
};

std::string opt(const std::optional<double> &v) { return v ? format_double(*v) : std::string(); }
std::string opt(const std::optional<milliseconds> &v) { return v ? std::to_string(v->count()) : std::string(); }

void write_file(const fs::path &path, const std::string &content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
    f << content;
    f.flush();
    if (!f)
        throw Error(ErrorKind::io, "error writing '" + path.string() + "'");
}

// CSV to --out (plus a .meta sidecar with the effective config) or to stdout
void emit(const Globals &g, const Streams &io, const std::string &csv, const std::string &meta)
{
    if (g.out.empty())
    {
        io.out << csv;
        return;
    }
    write_file(g.out, csv);
    write_file(meta_path(g.out), meta);
}

ExperimentConfig load(const Globals &g)
{
    ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
    if (g.seed)
        cfg.seed = *g.seed;
    return cfg;
}

std::vector<BeamId> subset_or_default(const std::string &text, const ExperimentConfig &cfg)
{
    return text.empty() ? cfg.detector.beams : parse_beam_subset(text);
}

Approach parse_approach(const std::string &text)
{
    if (text == "slow")
        return Approach::slow;
    if (text == "nominal")
        return Approach::nominal;
    throw Error(ErrorKind::invalid_config, "approach must be 'slow' or 'nominal'");
}

std::string approach_name(Approach a) { return a == Approach::slow ? "slow" : "nominal"; }

struct FovArgs
{
    double xmin = -0.5, xmax = 5.5, ymin = -1.5, ymax = 1.5, res = 0.005;
    std::string beams;
};

void cmd_fov(const Globals &g, const FovArgs &a, const Streams &io, const Diagnostics &diag)
{
    const Experiment exp(load(g));
    const auto subset = subset_or_default(a.beams, exp.config());
    const double half_lambda = exp.config().scene.wavelength() / 2.0;
    if (a.res > half_lambda)
        diag.warning("grid resolution " + format_double_short(a.res) + " m is coarser than half a wavelength (" +
                     format_double_short(half_lambda) + " m); fringes will alias");
    const auto grid = fov_grid(exp, {a.xmin, a.xmax, a.ymin, a.ymax, a.res}, subset, g.threads);
    std::string csv = "x_m,y_m,z_level\n";
    for (std::size_t iy = 0; iy < grid.ys.size(); ++iy)
        for (std::size_t ix = 0; ix < grid.xs.size(); ++ix)
            csv += format_double(grid.xs[ix]) + ',' + format_double(grid.ys[iy]) + ',' + opt(grid.at(ix, iy)) + '\n';
    emit(g, io, csv, "meta.command = fov\nmeta.beams = " + format_beam_subset(subset) + "\n" + echo_config(exp.config()));
}

struct RangeArgs
{
    std::optional<int> runs;
    std::string beams;
    std::string approach = "slow";
};

std::string range_csv(const RangeEstimate &est)
{
    std::string csv = "run_id,trajectory_id,seed,triggered,r_det_mm,t_d_ms,t_s_ms,t_p_ms,class\n";
    for (const auto &r : est.runs)
    {
        const auto &o = r.outcome;
        csv += std::to_string(r.run_id) + ',' + std::to_string(r.trajectory_id) + ',' + std::to_string(r.seed) + ',' +
               (o.triggered ? "true" : "false") + ',' +
               (r.r_det_m ? format_double(*r.r_det_m * 1000.0) : std::string()) + ',' + opt(o.t_d) + ',' +
               opt(o.t_s) + ',' + opt(o.t_p) + ',' + std::string(to_string(o.cls)) + '\n';
    }
    const auto row = [&](const std::string &key, const std::string &value) {
        csv += "summary." + key + ',' + value + '\n';
    };
    const auto stat = [](const std::optional<Summary> &s, double Summary::*field) {
        return s ? format_double((*s).*field) : std::string();
    };
    row("runs", std::to_string(est.runs.size()));
    row("threshold", format_double(est.threshold));
    row("true_detections", std::to_string(est.counts.true_detections));
    row("false_detections", std::to_string(est.counts.false_detections));
    row("misdetections", std::to_string(est.counts.misdetections));
    row("no_events", std::to_string(est.counts.no_events));
    row("censored", std::to_string(est.censored));
    row("accuracy", format_double(est.counts.accuracy()));
    row("mean_r_det_mm", stat(est.r_det_mm, &Summary::mean));
    row("min_r_det_mm", stat(est.r_det_mm, &Summary::min));
    row("q1_r_det_mm", stat(est.r_det_mm, &Summary::q1));
    row("median_r_det_mm", stat(est.r_det_mm, &Summary::median));
    row("q3_r_det_mm", stat(est.r_det_mm, &Summary::q3));
    row("max_r_det_mm", stat(est.r_det_mm, &Summary::max));
    row("mean_t_p_ms", stat(est.t_p_ms, &Summary::mean));
    row("max_t_p_ms", stat(est.t_p_ms, &Summary::max));
    return csv;
}

void cmd_range(const Globals &g, const RangeArgs &a, const Streams &io)
{
    const Experiment exp(load(g));
    const auto subset = subset_or_default(a.beams, exp.config());
    exp.check_subset(subset);
    const int runs = a.runs.value_or(exp.config().monte_carlo_runs);
    if (runs < 1)
        throw Error(ErrorKind::invalid_config, "--runs must be at least 1");
    const auto est = detection_range(exp, subset, runs, g.threads, parse_approach(a.approach));
    emit(g, io, range_csv(est),
         "meta.command = range\nmeta.beams = " + format_beam_subset(subset) + "\nmeta.approach = " + a.approach +
             "\n" + echo_config(exp.config()));
}

struct SweepArgs
{
    std::vector<double> thresholds;
    std::optional<int> runs;
    std::string beams;
    std::string approach = "nominal";
};

void cmd_sweep(const Globals &g, const SweepArgs &a, const Streams &io)
{
    const Experiment exp(load(g));
    const auto subset = subset_or_default(a.beams, exp.config());
    exp.check_subset(subset);
    if (a.thresholds.empty())
        throw Error(ErrorKind::invalid_config, "--thresholds needs at least one value");
    for (const double th : a.thresholds)
        if (!(th > 0.0))
            throw Error(ErrorKind::invalid_config, "thresholds must be positive");
    const int runs = a.runs.value_or(exp.config().monte_carlo_runs);
    if (runs < 1)
        throw Error(ErrorKind::invalid_config, "--runs must be at least 1");
    const Approach approach = parse_approach(a.approach);
    const std::string key = std::to_string(config_fingerprint(exp.config())) + '/' + std::to_string(runs) + '/' +
                            approach_name(approach);
    const auto traces = TraceCache::instance().get_or_simulate(
        key, [&] { return simulate_runs(exp, runs, {approach, false}, g.threads); });
    const auto rows = threshold_sweep(exp, *traces, subset, a.thresholds);
    std::string csv = "sigma_th,mean_tp_ms,accuracy\n";
    for (const auto &r : rows)
        csv += format_double(r.threshold) + ',' + opt(r.mean_tp_ms) + ',' + format_double(r.accuracy) + '\n';
    emit(g, io, csv,
         "meta.command = sweep\nmeta.beams = " + format_beam_subset(subset) + "\nmeta.approach = " + a.approach +
             "\nmeta.runs = " + std::to_string(runs) + "\n" + echo_config(exp.config()));
}

struct SimulateArgs
{
    int trajectory = 0;
    std::string approach = "nominal";
};

void cmd_simulate(const Globals &g, const SimulateArgs &a)
{
    if (g.out.empty())
        throw Error(ErrorKind::invalid_config, "simulate needs --out for the trace and its .meta sidecar");
    ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
    const std::uint64_t seed = g.seed.value_or(cfg.seed);
    const Experiment exp(cfg);
    const auto trace = simulate_trajectory(exp, a.trajectory, seed, {parse_approach(a.approach), false});

    std::ostringstream csv;
    write_trace(csv, to_trace_file(trace));
    TraceMeta meta;
    meta.t_s = trace.truth.t_s;
    meta.eligible_from = trace.truth.eligible_from;
    meta.trajectory = a.trajectory;
    meta.seed = seed;
    meta.config_echo = echo_config(exp.config());
    std::ostringstream m;
    write_meta(m, meta);
    write_file(g.out, csv.str());
    write_file(meta_path(g.out), m.str());
}

struct DetectArgs
{
    std::string trace;
    std::string beams;
};

void cmd_detect(const Globals &g, const DetectArgs &a, const Streams &io)
{
    std::ifstream in(a.trace, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, "cannot read trace '" + a.trace + "'");
    TraceFile trace;
    try
    {
        trace = read_trace(in);
    }
    catch (const Error &e)
    {
        if (e.kind() != ErrorKind::parse)
            throw;
        throw Error(ErrorKind::parse, a.trace + ": " + e.what());
    }

    std::optional<TraceMeta> meta;
    const auto mpath = meta_path(a.trace);
    if (fs::exists(mpath))
    {
        std::ifstream mf(mpath, std::ios::binary);
        if (!mf)
            throw Error(ErrorKind::io, "cannot read '" + mpath.string() + "'");
        meta = read_meta(mf);
    }

    ExperimentConfig cfg;
    if (!g.config.empty())
        cfg = load_config(g.config);
    else if (meta && !meta->config_echo.empty())
        cfg = parse_config(meta->config_echo);

    const auto subset = subset_or_default(a.beams, cfg);
    double threshold = 0.0;
    switch (cfg.detector.threshold.mode)
    {
    case ThresholdMode::fixed: threshold = cfg.detector.threshold.value; break;
    case ThresholdMode::table: threshold = table_threshold(cfg.main.hpbw_deg, subset); break;
    case ThresholdMode::calibrated:
        throw Error(ErrorKind::invalid_config,
                    "detector.sigma_th = calibrated needs simulated quiescent data; give a numeric threshold");
    }
    DetectorConfig dcfg;
    dcfg.window = cfg.detector.window;
    dcfg.sample_interval = cfg.detector.sample_interval;
    dcfg.threshold = threshold;
    dcfg.beams = subset;
    dcfg.validate();
    if (const auto stride = trace.stride(); stride && *stride != dcfg.sample_interval)
        throw Error(ErrorKind::invalid_config, "trace stride " + std::to_string(stride->count()) +
                                                   " ms differs from detector.sample_interval_ms " +
                                                   std::to_string(dcfg.sample_interval.count()));

    const auto levels = trace.levels(subset);
    Detection det = detect(levels, dcfg);
    // detect() indexes samples; report the trace's own timestamps
    if (det.index)
        det.t_d = trace.times[*det.index];
    const auto sigma = sliding_std(levels, dcfg.window_samples());
    const std::size_t lead = dcfg.window_samples() - 1;

    std::string csv = "t_ms,z_level,sigma,crossed\n";
    for (std::size_t k = 0; k < levels.size(); ++k)
    {
        std::optional<double> s;
        if (k >= lead)
            s = sigma[k - lead];
        csv += std::to_string(trace.times[k].count()) + ',' + format_double(levels[k]) + ',' + opt(s) + ',' +
               (s && *s >= threshold ? "1" : "0") + '\n';
    }
    const auto row = [&](const std::string &key, const std::string &value) {
        csv += "report." + key + ',' + value + '\n';
    };
    row("threshold", format_double(threshold));
    row("beams", format_beam_subset(subset));
    row("result", det.triggered ? "detection" : "no detection");
    row("t_d_ms", opt(det.t_d));
    if (meta && meta->t_s)
    {
        const auto outcome = make_outcome(det, meta->truth());
        row("t_s_ms", opt(outcome.t_s));
        row("t_p_ms", opt(outcome.t_p));
        row("class", std::string(to_string(outcome.cls)));
    }
    emit(g, io, csv, "meta.command = detect\nmeta.trace = " + a.trace + "\n" + echo_config(cfg));
}

int exit_code_for(ErrorKind kind) noexcept { return kind == ErrorKind::io ? exit_io_error : exit_user_error; }
} // namespace

int run(const std::vector<std::string> &args, const Streams &io)
{
    const Diagnostics diag(io);
    CLI::App app{"mmWave guard-beam blockage prediction toolkit", "guardbeam"};
    app.require_subcommand(1);

    Globals g;
    const auto add_globals = [&g](CLI::App &a) {
        a.add_option("--config,-c", g.config, "Config file (key = value)");
        a.add_option("--seed", g.seed, "Override experiment.seed (simulate: run seed)");
        a.add_option("--threads,-j", g.threads, "Worker threads, 0 = all cores");
        a.add_option("--out,-o", g.out, "Output path (default: standard output)");
    };

    FovArgs fov;
    auto *fov_cmd = app.add_subcommand("fov", "Noiseless level map around the link");
    fov_cmd->add_option("--xmin", fov.xmin, "Grid x minimum (m)")->capture_default_str();
    fov_cmd->add_option("--xmax", fov.xmax, "Grid x maximum (m)")->capture_default_str();
    fov_cmd->add_option("--ymin", fov.ymin, "Grid y minimum (m)")->capture_default_str();
    fov_cmd->add_option("--ymax", fov.ymax, "Grid y maximum (m)")->capture_default_str();
    fov_cmd->add_option("--res", fov.res, "Grid spacing (m)")->capture_default_str();
    fov_cmd->add_option("--beams", fov.beams, "Beam subset, e.g. main+guard1");
    add_globals(*fov_cmd);

    RangeArgs range;
    auto *range_cmd = app.add_subcommand("range", "Monte-Carlo detection range");
    range_cmd->add_option("--runs,-n", range.runs, "Number of runs (default experiment.runs)");
    range_cmd->add_option("--beams", range.beams, "Beam subset");
    range_cmd->add_option("--approach", range.approach, "slow | nominal")->capture_default_str();
    add_globals(*range_cmd);

    DetectArgs det;
    auto *detect_cmd = app.add_subcommand("detect", "Run the detector on a recorded trace");
    detect_cmd->add_option("trace", det.trace, "Trace CSV")->required();
    detect_cmd->add_option("--beams", det.beams, "Beam subset");
    add_globals(*detect_cmd);

    SimulateArgs sim;
    auto *sim_cmd = app.add_subcommand("simulate", "Write the per-beam trace of one run");
    sim_cmd->add_option("--trajectory,-t", sim.trajectory, "Trajectory index (0-based)")->capture_default_str();
    sim_cmd->add_option("--approach", sim.approach, "nominal | slow")->capture_default_str();
    add_globals(*sim_cmd);

    SweepArgs sweep;
    auto *sweep_cmd = app.add_subcommand("sweep", "Prediction time and accuracy over thresholds");
    sweep_cmd->add_option("--thresholds", sweep.thresholds, "Comma-separated thresholds")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--runs,-n", sweep.runs, "Number of runs (default experiment.runs)");
    sweep_cmd->add_option("--beams", sweep.beams, "Beam subset");
    sweep_cmd->add_option("--approach", sweep.approach, "nominal | slow")->capture_default_str();
    add_globals(*sweep_cmd);

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError &e)
    {
        std::ostringstream out, err;
        const int code = app.exit(e, out, err);
        io.out << out.str();
        if (code != 0)
        {
            diag.error(e.what());
            return exit_user_error;
        }
        return exit_ok;
    }

    try
    {
        if (fov_cmd->parsed())
            cmd_fov(g, fov, io, diag);
        else if (range_cmd->parsed())
            cmd_range(g, range, io);
        else if (detect_cmd->parsed())
            cmd_detect(g, det, io);
        else if (sim_cmd->parsed())
            cmd_simulate(g, sim);
        else if (sweep_cmd->parsed())
            cmd_sweep(g, sweep, io);
    }
    catch (const Error &e)
    {
        diag.error(e.what());
        return exit_code_for(e.kind());
    }
    catch (const std::exception &e)
    {
        diag.error(e.what());
        return exit_user_error;
    }
    return exit_ok;
}

} // namespace guardbeam::cli
