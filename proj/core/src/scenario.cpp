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

#include "guardbeam/scenario.hpp"

#include "guardbeam/error.hpp"
#include "guardbeam/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace guardbeam
{

namespace
{
constexpr std::uint64_t kSpeedStream = 0x5b33dULL;
constexpr std::uint64_t kCalibrationSeedIndex = 0xca1bULL;

double seconds(milliseconds t) noexcept { return static_cast<double>(t.count()) / 1000.0; }

std::vector<std::complex<double>> normalized_values(const Experiment &exp, const std::vector<std::complex<double>> &h,
                                                    std::span<const ReceiveBeam> beams, const NoiseModel &noise,
                                                    std::uint64_t index, milliseconds t)
{
    std::vector<std::complex<double>> out(h.size());
    for (std::size_t b = 0; b < h.size(); ++b)
        out[b] = received_sample(h[b], exp.config().scene, noise, beams[b].id, index, t).value / exp.baseline();
    return out;
}

std::size_t beam_slot(const std::vector<BeamId> &beams, BeamId id)
{
    const auto it = std::find(beams.begin(), beams.end(), id);
    if (it == beams.end())
        throw Error(ErrorKind::invalid_config, "beam " + to_string(id) + " is not part of the trace");
    return static_cast<std::size_t>(it - beams.begin());
}
} // namespace

Point2 Trajectory::direction() const noexcept
{
    const double a = heading_deg * std::numbers::pi / 180.0;
    return {std::cos(a), std::sin(a)};
}

std::vector<Trajectory> default_trajectories(Point2 tx, Point2 rx, double start_distance_m, double speed_mps)
{
    const LinkGeometry geom(tx, rx);
    const Point2 n = geom.normal();
    const double heading = std::atan2(-n.y, -n.x) * 180.0 / std::numbers::pi;
    std::vector<Trajectory> out;
    for (const double f : {0.25, 0.5, 0.75})
        out.push_back({geom.from_link_local(f * geom.los_distance(), start_distance_m), heading, speed_mps});
    return out;
}

void ExperimentConfig::validate() const
{
    scene.validate();
    const LinkGeometry geom(tx, rx);
    if (!(blocker_radius_m > 0.0) || !std::isfinite(blocker_radius_m))
        throw Error(ErrorKind::invalid_config, "blocker radius must be positive");
    if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
        throw Error(ErrorKind::invalid_config, "element spacing must be positive");
    BeamSpec{tx_hpbw_deg, 0.0, BeamRole::tx}.validate();
    if (main.role != BeamRole::rx_main)
        throw Error(ErrorKind::invalid_config, "main beam must have role rx_main");
    main.validate();
    for (const auto &g : guards)
    {
        if (g.role != BeamRole::rx_guard)
            throw Error(ErrorKind::invalid_config, "guard beams must have role rx_guard");
        g.validate();
    }
    if (detector.sample_interval.count() <= 0 || detector.window.count() <= 0 ||
        detector.window.count() % detector.sample_interval.count() != 0 ||
        detector.window / detector.sample_interval < 2)
        throw Error(ErrorKind::invalid_config, "detector window must be at least two whole sample intervals");
    if (detector.beams.empty())
        throw Error(ErrorKind::invalid_config, "detector beam subset is empty");
    for (const auto id : detector.beams)
        if (id.index < 0 || id.index > static_cast<int>(guards.size()))
            throw Error(ErrorKind::invalid_config, "detector uses undeclared beam " + to_string(id));
    if (detector.threshold.mode == ThresholdMode::fixed &&
        (!(detector.threshold.value > 0.0) || !std::isfinite(detector.threshold.value)))
        throw Error(ErrorKind::invalid_config, "detector threshold must be positive");
    if (!(detector.calibration_multiplier > 0.0) || !std::isfinite(detector.calibration_multiplier))
        throw Error(ErrorKind::invalid_config, "calibration multiplier must be positive");
    if (!(detector.eligibility_m >= 0.0))
        throw Error(ErrorKind::invalid_config, "eligibility distance must be non-negative");
    if (trajectories.empty())
        throw Error(ErrorKind::invalid_config, "no trajectories");
    for (const auto &t : trajectories)
        if (!(t.speed_mps > 0.0) || !std::isfinite(t.speed_mps) || !std::isfinite(t.heading_deg) ||
            !std::isfinite(t.start.x) || !std::isfinite(t.start.y))
            throw Error(ErrorKind::invalid_config, "trajectory needs a finite start, heading and positive speed");
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw Error(ErrorKind::invalid_config, "duration must be positive");
    if (std::llround(duration_s * 1000.0 / static_cast<double>(detector.sample_interval.count())) <
        detector.window / detector.sample_interval)
        throw Error(ErrorKind::invalid_config, "duration is shorter than one detection window");
    if (monte_carlo_runs < 1)
        throw Error(ErrorKind::invalid_config, "runs must be at least 1");
    if (!(speed_jitter >= 0.0 && speed_jitter < 1.0))
        throw Error(ErrorKind::invalid_config, "speed jitter must be in [0, 1)");
    if (!(range_speed_mps > 0.0) || !std::isfinite(range_speed_mps))
        throw Error(ErrorKind::invalid_config, "range speed must be positive");
}

std::vector<Preset> beam_presets()
{
    const auto make = [](std::string name, double main_hpbw, std::optional<BeamSpec> guard) {
        ExperimentConfig cfg;
        cfg.main.hpbw_deg = main_hpbw;
        cfg.guards.clear();
        cfg.detector.beams = {BeamId::main()};
        if (guard)
        {
            cfg.guards.push_back(*guard);
            cfg.detector.beams.push_back(BeamId::guard(1));
        }
        return Preset{std::move(name), std::move(cfg)};
    };
    return {
        make("main7", 7.0, std::nullopt),
        make("main13", 13.0, std::nullopt),
        make("guard7_phi7", 7.0, BeamSpec{7.0, 7.0, BeamRole::rx_guard}),
        make("guard13_phi7", 7.0, BeamSpec{13.0, 7.0, BeamRole::rx_guard}),
        make("guard7_phi14", 7.0, BeamSpec{7.0, 14.0, BeamRole::rx_guard}),
        make("guard13_phi14", 7.0, BeamSpec{13.0, 14.0, BeamRole::rx_guard}),
    };
}

double table_threshold(double main_hpbw_deg, std::span<const BeamId> subset) noexcept
{
    const bool main_only = subset.size() == 1 && subset[0].is_main();
    return main_only && main_hpbw_deg >= 10.0 ? 0.1 : 0.03;
}

std::vector<double> TrajectoryTrace::levels(std::span<const BeamId> subset) const
{
    std::vector<std::size_t> slots;
    for (const auto id : subset)
        slots.push_back(beam_slot(beams, id));
    std::vector<double> out(size());
    std::vector<std::complex<double>> v(slots.size());
    for (std::size_t k = 0; k < out.size(); ++k)
    {
        for (std::size_t j = 0; j < slots.size(); ++j)
            v[j] = samples[slots[j]][k];
        out[k] = combined_level(v);
    }
    return out;
}

Experiment::Experiment(ExperimentConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))), geom_(cfg_.tx, cfg_.rx),
      tx_(BeamPattern::synthesize({cfg_.tx_hpbw_deg, 0.0, BeamRole::tx}, cfg_.element_spacing)), baseline_(0.0)
{
    beams_.push_back({BeamId::main(), BeamPattern::synthesize(cfg_.main, cfg_.element_spacing)});
    for (std::size_t k = 0; k < cfg_.guards.size(); ++k)
        beams_.push_back({BeamId::guard(static_cast<int>(k) + 1),
                          BeamPattern::synthesize(cfg_.guards[k], cfg_.element_spacing)});
    baseline_ = baseline_amplitude(geom_, tx_, beams_.front().pattern, cfg_.scene);
}

void Experiment::check_subset(std::span<const BeamId> subset) const
{
    if (subset.empty())
        throw Error(ErrorKind::invalid_config, "beam subset is empty");
    for (std::size_t i = 0; i < subset.size(); ++i)
    {
        if (subset[i].index < 0 || subset[i].index >= static_cast<int>(beams_.size()))
            throw Error(ErrorKind::invalid_config, "beam " + to_string(subset[i]) + " is not declared");
        for (std::size_t j = 0; j < i; ++j)
            if (subset[j] == subset[i])
                throw Error(ErrorKind::invalid_config, "beam " + to_string(subset[i]) + " listed twice");
    }
}

DetectorConfig Experiment::detector_config(std::span<const BeamId> subset, double threshold) const
{
    check_subset(subset);
    DetectorConfig d;
    d.window = cfg_.detector.window;
    d.sample_interval = cfg_.detector.sample_interval;
    d.threshold = threshold;
    d.beams.assign(subset.begin(), subset.end());
    d.validate();
    return d;
}

std::optional<double> Experiment::level_at(Point2 pos, std::span<const BeamId> subset) const
{
    check_subset(subset);
    if (in_shadowing_area(geom_, pos, cfg_.blocker_radius_m))
        return std::nullopt;
    std::vector<ReceiveBeam> sel;
    for (const auto id : subset)
        sel.push_back(beams_[static_cast<std::size_t>(id.index)]);
    std::vector<std::complex<double>> h;
    try
    {
        h = channel_response(geom_, pos, cfg_.blocker_radius_m, tx_, sel, cfg_.scene);
    }
    catch (const Error &e)
    {
        if (e.kind() != ErrorKind::domain)
            throw;
        return std::nullopt;
    }
    const NoiseModel silent(0.0, 0);
    return combined_level(normalized_values(*this, h, sel, silent, 0, milliseconds{0}));
}

double Experiment::reference_level(std::span<const BeamId> subset) const
{
    check_subset(subset);
    std::vector<ReceiveBeam> sel;
    for (const auto id : subset)
        sel.push_back(beams_[static_cast<std::size_t>(id.index)]);
    const auto h = channel_response(geom_, std::nullopt, cfg_.blocker_radius_m, tx_, sel, cfg_.scene);
    return combined_level(normalized_values(*this, h, sel, NoiseModel(0.0, 0), 0, milliseconds{0}));
}

TrajectoryTrace simulate_trajectory(const Experiment &exp, int trajectory_index, std::uint64_t run_seed,
                                    const RunOptions &options)
{
    const auto &cfg = exp.config();
    if (trajectory_index < 0 || trajectory_index >= static_cast<int>(cfg.trajectories.size()))
        throw Error(ErrorKind::invalid_config, "trajectory index out of range");
    const Trajectory &traj = cfg.trajectories[static_cast<std::size_t>(trajectory_index)];

    const double nominal = options.approach == Approach::slow ? cfg.range_speed_mps : traj.speed_mps;
    const double u = CounterRng::uniform(run_seed, kSpeedStream, 0);
    const double speed = nominal * (1.0 + cfg.speed_jitter * (2.0 * u - 1.0));
    const double duration =
        options.approach == Approach::slow ? cfg.duration_s * traj.speed_mps / cfg.range_speed_mps : cfg.duration_s;

    const milliseconds dt = cfg.detector.sample_interval;
    const double dt_s = seconds(dt);
    const auto n_max = static_cast<long long>(std::llround(duration / dt_s));

    const BlockerBody body{cfg.blocker_radius_m, speed, traj.start, traj.direction()};
    body.validate();
    const auto ks = shadowing_index(exp.geometry(), body, dt_s);
    if (ks && *ks == 0)
        throw Error(ErrorKind::invalid_scenario, "trajectory starts inside the shadowing area");
    const bool crosses = ks && *ks <= n_max;
    const long long n = crosses ? *ks : n_max;

    TrajectoryTrace out;
    out.sample_interval = dt;
    out.trajectory_index = trajectory_index;
    out.seed = run_seed;
    out.speed_mps = speed;
    if (crosses)
        out.truth.t_s = *ks * dt;
    for (const auto &b : exp.beams())
        out.beams.push_back(b.id);
    out.samples.assign(exp.beams().size(), {});
    for (auto &s : out.samples)
        s.reserve(static_cast<std::size_t>(n));
    out.positions.reserve(static_cast<std::size_t>(n));
    out.ranges.reserve(static_cast<std::size_t>(n));

    const NoiseModel noise = options.noiseless ? NoiseModel(0.0, run_seed)
                                               : NoiseModel::from_dbm(cfg.scene.noise_dbm, run_seed);
    for (long long k = 0; k < n; ++k)
    {
        const Point2 pos = body.position_at(static_cast<double>(k) * dt_s);
        const double r = std::abs(exp.geometry().to_link_local(pos).y);
        std::vector<std::complex<double>> h;
        try
        {
            h = channel_response(exp.geometry(), pos, cfg.blocker_radius_m, exp.tx_pattern(), exp.beams(),
                                 cfg.scene);
        }
        catch (const Error &e)
        {
            // Collinear with the link outside the segment: no reflection geometry
            if (e.kind() != ErrorKind::domain)
                throw;
            h = channel_response(exp.geometry(), std::nullopt, cfg.blocker_radius_m, exp.tx_pattern(), exp.beams(),
                                 cfg.scene);
        }
        const auto v = normalized_values(exp, h, exp.beams(), noise, static_cast<std::uint64_t>(k), k * dt);
        for (std::size_t b = 0; b < v.size(); ++b)
            out.samples[b].push_back(v[b]);
        out.positions.push_back(pos);
        out.ranges.push_back(r);
        if (!out.truth.eligible_from && r <= cfg.detector.eligibility_m)
            out.truth.eligible_from = k * dt;
    }
    return out;
}

std::vector<double> quiescent_levels(const Experiment &exp, std::span<const BeamId> subset, std::uint64_t seed,
                                     std::size_t n_samples)
{
    exp.check_subset(subset);
    std::vector<ReceiveBeam> sel;
    for (const auto id : subset)
        sel.push_back(exp.beams()[static_cast<std::size_t>(id.index)]);
    const auto &cfg = exp.config();
    const auto h = channel_response(exp.geometry(), std::nullopt, cfg.blocker_radius_m, exp.tx_pattern(), sel,
                                    cfg.scene);
    const NoiseModel noise = NoiseModel::from_dbm(cfg.scene.noise_dbm, seed);
    std::vector<double> out(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k)
    {
        const auto t = static_cast<long long>(k) * cfg.detector.sample_interval;
        out[k] = combined_level(normalized_values(exp, h, sel, noise, k, t));
    }
    return out;
}

double resolve_threshold(const Experiment &exp, std::span<const BeamId> subset)
{
    exp.check_subset(subset);
    const auto &d = exp.config().detector;
    switch (d.threshold.mode)
    {
    case ThresholdMode::fixed:
        return d.threshold.value;
    case ThresholdMode::table:
        return table_threshold(exp.config().main.hpbw_deg, subset);
    case ThresholdMode::calibrated: {
        const auto w = static_cast<std::size_t>(d.window / d.sample_interval);
        const std::size_t n = std::max<std::size_t>(10 * w, 2000);
        const auto levels = quiescent_levels(exp, subset, derive_seed(exp.config().seed, kCalibrationSeedIndex), n);
        const double th = calibrate_threshold(levels, w, d.calibration_multiplier);
        if (!(th > 0.0))
            throw Error(ErrorKind::calibration, "calibrated threshold is zero (noise-free scene)");
        return th;
    }
    }
    throw Error(ErrorKind::invalid_config, "unknown threshold mode");
}

std::optional<Summary> summarize(std::span<const double> values)
{
    if (values.empty())
        return std::nullopt;
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    Summary s;
    s.count = v.size();
    double sum = 0.0;
    for (const double x : v)
        sum += x;
    s.mean = sum / static_cast<double>(v.size());
    s.min = v.front();
    s.max = v.back();
    s.q1 = quantile(v, 0.25);
    s.median = quantile(v, 0.5);
    s.q3 = quantile(v, 0.75);
    return s;
}

double OutcomeCounts::accuracy() const noexcept
{
    const auto n = events();
    return n == 0 ? 0.0 : static_cast<double>(true_detections) / static_cast<double>(n);
}

OutcomeCounts tally(std::span<const DetectionOutcome> outcomes) noexcept
{
    OutcomeCounts c;
    for (const auto &o : outcomes)
    {
        switch (o.cls)
        {
        case OutcomeClass::true_detection: ++c.true_detections; break;
        case OutcomeClass::false_detection: ++c.false_detections; break;
        case OutcomeClass::misdetection: ++c.misdetections; break;
        case OutcomeClass::no_event: ++c.no_events; break;
        }
    }
    return c;
}

std::optional<Summary> prediction_time_stats(std::span<const DetectionOutcome> outcomes)
{
    std::vector<double> tp;
    for (const auto &o : outcomes)
        if (o.cls == OutcomeClass::true_detection && o.t_p)
            tp.push_back(static_cast<double>(o.t_p->count()));
    return summarize(tp);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        const std::lock_guard lock(error_mutex);
                        if (!first_error)
                            first_error = std::current_exception();
                        next = n;
                    }
                }
            });
    }
    if (first_error)
        std::rethrow_exception(first_error);
}

std::vector<TrajectoryTrace> simulate_runs(const Experiment &exp, int runs, const RunOptions &options,
                                           unsigned threads)
{
    if (runs < 1)
        throw Error(ErrorKind::invalid_config, "runs must be at least 1");
    const auto n_traj = static_cast<int>(exp.config().trajectories.size());
    std::vector<TrajectoryTrace> out(static_cast<std::size_t>(runs));
    parallel_for(out.size(), threads, [&](std::size_t i) {
        out[i] = simulate_trajectory(exp, static_cast<int>(i) % n_traj, derive_seed(exp.config().seed, i), options);
    });
    return out;
}

RangeEstimate evaluate_runs(const Experiment &exp, std::span<const TrajectoryTrace> traces,
                            std::span<const BeamId> subset, double threshold)
{
    const DetectorConfig dcfg = exp.detector_config(subset, threshold);
    RangeEstimate est;
    est.threshold = threshold;
    std::vector<DetectionOutcome> outcomes;
    std::vector<double> r_mm;
    for (std::size_t i = 0; i < traces.size(); ++i)
    {
        const auto &tr = traces[i];
        const auto levels = tr.levels(subset);
        const Detection det = levels.size() < dcfg.window_samples() ? Detection{} : detect(levels, dcfg);
        RunRecord rec;
        rec.run_id = static_cast<int>(i);
        rec.trajectory_id = tr.trajectory_index;
        rec.seed = tr.seed;
        rec.outcome = make_outcome(det, tr.truth);
        if (det.index)
            rec.r_det_m = tr.ranges[*det.index];
        if (!det.triggered)
            ++est.censored;
        if (rec.outcome.cls == OutcomeClass::true_detection)
            r_mm.push_back(*rec.r_det_m * 1000.0);
        outcomes.push_back(rec.outcome);
        est.runs.push_back(rec);
    }
    est.r_det_mm = summarize(r_mm);
    est.t_p_ms = prediction_time_stats(outcomes);
    est.counts = tally(outcomes);
    return est;
}

RangeEstimate detection_range(const Experiment &exp, std::span<const BeamId> subset, int runs, unsigned threads,
                              Approach approach)
{
    const double th = resolve_threshold(exp, subset);
    const auto traces = simulate_runs(exp, runs, {approach, false}, threads);
    return evaluate_runs(exp, traces, subset, th);
}

std::vector<SweepRow> threshold_sweep(const Experiment &exp, std::span<const TrajectoryTrace> traces,
                                      std::span<const BeamId> subset, std::span<const double> thresholds)
{
    if (thresholds.empty())
        throw Error(ErrorKind::invalid_config, "threshold list is empty");
    for (const double th : thresholds)
        if (!(th > 0.0) || !std::isfinite(th))
            throw Error(ErrorKind::invalid_config, "thresholds must be positive");
    std::vector<SweepRow> rows;
    for (const double th : thresholds)
    {
        const auto est = evaluate_runs(exp, traces, subset, th);
        SweepRow row;
        row.threshold = th;
        if (est.t_p_ms)
            row.mean_tp_ms = est.t_p_ms->mean;
        row.accuracy = est.counts.accuracy();
        row.counts = est.counts;
        rows.push_back(row);
    }
    return rows;
}

TraceCache &TraceCache::instance()
{
    static TraceCache cache;
    return cache;
}

TraceCache::Ensemble TraceCache::get_or_simulate(const std::string &key,
                                                 const std::function<std::vector<TrajectoryTrace>()> &make)
{
    {
        const std::lock_guard lock(mutex_);
        if (const auto it = entries_.find(key); it != entries_.end())
            return it->second;
    }
    auto made = std::make_shared<const std::vector<TrajectoryTrace>>(make());
    const std::lock_guard lock(mutex_);
    return entries_.try_emplace(key, std::move(made)).first->second;
}

std::size_t TraceCache::size() const
{
    const std::lock_guard lock(mutex_);
    return entries_.size();
}

void TraceCache::clear()
{
    const std::lock_guard lock(mutex_);
    entries_.clear();
}

FovGrid fov_grid(const Experiment &exp, const GridSpec &grid, std::span<const BeamId> subset, unsigned threads)
{
    if (!(grid.resolution > 0.0) || !std::isfinite(grid.resolution))
        throw Error(ErrorKind::invalid_config, "grid resolution must be positive");
    if (!(grid.xmax > grid.xmin) || !(grid.ymax > grid.ymin))
        throw Error(ErrorKind::invalid_config, "empty grid");
    exp.check_subset(subset);
    const auto axis = [&](double lo, double hi) {
        std::vector<double> v;
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / grid.resolution + 1e-9)) + 1;
        for (std::size_t i = 0; i < n; ++i)
            v.push_back(lo + static_cast<double>(i) * grid.resolution);
        return v;
    };
    FovGrid out;
    out.xs = axis(grid.xmin, grid.xmax);
    out.ys = axis(grid.ymin, grid.ymax);
    out.z.assign(out.xs.size() * out.ys.size(), std::nullopt);
    parallel_for(out.ys.size(), threads, [&](std::size_t iy) {
        for (std::size_t ix = 0; ix < out.xs.size(); ++ix)
            out.z[iy * out.xs.size() + ix] = exp.level_at({out.xs[ix], out.ys[iy]}, subset);
    });
    return out;
}

} // namespace guardbeam
