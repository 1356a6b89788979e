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

#ifndef GUARDBEAM_SCENARIO_HPP
#define GUARDBEAM_SCENARIO_HPP

#include "guardbeam/beampattern.hpp"
#include "guardbeam/channel.hpp"
#include "guardbeam/detector.hpp"
#include "guardbeam/geometry.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace guardbeam
{

// Straight walk; heading is measured counter-clockwise from +x
struct Trajectory
{
    Point2 start;
    double heading_deg = -90.0;
    double speed_mps = 1.0;

    Point2 direction() const noexcept;
    friend bool operator==(const Trajectory &, const Trajectory &) = default;
};

// Perpendicular crossings at 1/4, 1/2 and 3/4 of the link, approaching from the guard side
std::vector<Trajectory> default_trajectories(Point2 tx, Point2 rx, double start_distance_m, double speed_mps);

enum class ThresholdMode
{
    table,      // per-configuration default (0.1 for a 13 deg main-only beam, else 0.03)
    calibrated, // calibrate_threshold() on simulated blocker-free traces
    fixed
};

struct ThresholdSetting
{
    ThresholdMode mode = ThresholdMode::table;
    double value = 0.03; // used when mode == fixed

    friend bool operator==(const ThresholdSetting &, const ThresholdSetting &) = default;
};

struct DetectorSettings
{
    milliseconds window{100};
    milliseconds sample_interval{10};
    ThresholdSetting threshold;
    std::vector<BeamId> beams{BeamId::main()};
    double calibration_multiplier = 1.2;
    double eligibility_m = 2.0; // triggers while the blocker is farther from the link are false

    friend bool operator==(const DetectorSettings &, const DetectorSettings &) = default;
};

struct ExperimentConfig
{
    SceneConfig scene;
    Point2 tx{0.0, 0.0};
    Point2 rx{5.0, 0.0};
    double blocker_radius_m = 0.15;
    double element_spacing = 0.5;
    double tx_hpbw_deg = 7.0;
    BeamSpec main{7.0, 0.0, BeamRole::rx_main};
    std::vector<BeamSpec> guards{{7.0, 7.0, BeamRole::rx_guard}, {7.0, 14.0, BeamRole::rx_guard}};
    DetectorSettings detector;
    double start_distance_m = 2.5; // only used to build default trajectories
    double speed_mps = 1.0;        // idem
    std::vector<Trajectory> trajectories = default_trajectories({0.0, 0.0}, {5.0, 0.0}, 2.5, 1.0);
    double duration_s = 5.0;
    int monte_carlo_runs = 200;
    std::uint64_t seed = 1;
    double speed_jitter = 0.2;     // uniform +-fraction of the nominal speed per run
    double range_speed_mps = 0.25; // slow approach used for detection-range runs

    void validate() const;
    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

// The six receive configurations of the reference simulation study
struct Preset
{
    std::string name;
    ExperimentConfig config;
};
std::vector<Preset> beam_presets();

// Per-configuration default threshold on the normalized scale
double table_threshold(double main_hpbw_deg, std::span<const BeamId> subset) noexcept;

enum class Approach
{
    nominal, // trajectory speeds as configured
    slow     // range_speed_mps, duration stretched to cover the same distance
};

struct RunOptions
{
    Approach approach = Approach::nominal;
    bool noiseless = false;
};

// One simulated run. samples[b][k] is the received value of beams[b] at t = k dt, divided by
// the unblocked noiseless main-beam amplitude. Recording stops at t_s.
struct TrajectoryTrace
{
    std::vector<BeamId> beams;
    std::vector<std::vector<std::complex<double>>> samples;
    std::vector<Point2> positions;
    std::vector<double> ranges; // |r| of the blocker centre, m
    BlockageTruth truth;
    milliseconds sample_interval{10};
    int trajectory_index = 0;
    std::uint64_t seed = 0;
    double speed_mps = 0.0;

    std::size_t size() const noexcept { return positions.size(); }
    std::vector<double> levels(std::span<const BeamId> subset) const;
};

// Resolved runtime state of an ExperimentConfig: synthesized patterns and the normalization baseline
class Experiment
{
public:
    explicit Experiment(ExperimentConfig cfg);

    const ExperimentConfig &config() const noexcept { return cfg_; }
    const LinkGeometry &geometry() const noexcept { return geom_; }
    const BeamPattern &tx_pattern() const noexcept { return tx_; }
    const std::vector<ReceiveBeam> &beams() const noexcept { return beams_; }
    double baseline() const noexcept { return baseline_; }

    // Throws Error(invalid_config) for an empty subset or undeclared beams
    void check_subset(std::span<const BeamId> subset) const;
    DetectorConfig detector_config(std::span<const BeamId> subset, double threshold) const;

    // Noiseless normalized level of a beam subset with the blocker at pos (nullopt inside the
    // shadowing area or on the extended link line where no reflection geometry exists)
    std::optional<double> level_at(Point2 pos, std::span<const BeamId> subset) const;
    double reference_level(std::span<const BeamId> subset) const; // no blocker

private:
    ExperimentConfig cfg_;
    LinkGeometry geom_;
    BeamPattern tx_;
    std::vector<ReceiveBeam> beams_;
    double baseline_;
};

TrajectoryTrace simulate_trajectory(const Experiment &exp, int trajectory_index, std::uint64_t run_seed,
                                    const RunOptions &options = {});

// Blocker-free normalized level trace of a subset
std::vector<double> quiescent_levels(const Experiment &exp, std::span<const BeamId> subset, std::uint64_t seed,
                                     std::size_t n_samples);

// Threshold for a subset according to the configured ThresholdSetting
double resolve_threshold(const Experiment &exp, std::span<const BeamId> subset);

struct RunRecord
{
    int run_id = 0;
    int trajectory_id = 0;
    std::uint64_t seed = 0;
    DetectionOutcome outcome;
    std::optional<double> r_det_m; // |r| at t_d for triggered runs
};

struct Summary
{
    std::size_t count = 0;
    double mean = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

std::optional<Summary> summarize(std::span<const double> values);

struct OutcomeCounts
{
    std::size_t true_detections = 0;
    std::size_t false_detections = 0;
    std::size_t misdetections = 0;
    std::size_t no_events = 0;

    std::size_t events() const noexcept { return true_detections + false_detections + misdetections; }
    double accuracy() const noexcept;
};

OutcomeCounts tally(std::span<const DetectionOutcome> outcomes) noexcept;

// Mean/max/quartiles of t_p (ms) over true detections; nullopt when there are none
std::optional<Summary> prediction_time_stats(std::span<const DetectionOutcome> outcomes);

struct RangeEstimate
{
    double threshold = 0.0;
    std::vector<RunRecord> runs;
    std::optional<Summary> r_det_mm; // true detections only
    std::optional<Summary> t_p_ms;
    OutcomeCounts counts;
    std::size_t censored = 0; // runs that never triggered
};

// Simulated run ensemble: run i uses trajectory i mod n and seed derive_seed(cfg.seed, i)
std::vector<TrajectoryTrace> simulate_runs(const Experiment &exp, int runs, const RunOptions &options,
                                           unsigned threads = 0);

RangeEstimate evaluate_runs(const Experiment &exp, std::span<const TrajectoryTrace> traces,
                            std::span<const BeamId> subset, double threshold);

RangeEstimate detection_range(const Experiment &exp, std::span<const BeamId> subset, int runs,
                              unsigned threads = 0, Approach approach = Approach::slow);

struct SweepRow
{
    double threshold = 0.0;
    std::optional<double> mean_tp_ms;
    double accuracy = 0.0;
    OutcomeCounts counts;
};

std::vector<SweepRow> threshold_sweep(const Experiment &exp, std::span<const TrajectoryTrace> traces,
                                      std::span<const BeamId> subset, std::span<const double> thresholds);

// Process-wide cache of run ensembles keyed by a config hash, so repeated sweeps reuse
// identical noise realizations
class TraceCache
{
public:
    using Ensemble = std::shared_ptr<const std::vector<TrajectoryTrace>>;

    static TraceCache &instance();
    Ensemble get_or_simulate(const std::string &key, const std::function<std::vector<TrajectoryTrace>()> &make);
    std::size_t size() const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::map<std::string, Ensemble> entries_;
};

struct GridSpec
{
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    double resolution = 0.005;
};

// Noiseless level map; z is row-major with y as the outer index
struct FovGrid
{
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::optional<double>> z;

    const std::optional<double> &at(std::size_t ix, std::size_t iy) const { return z[iy * xs.size() + ix]; }
};

FovGrid fov_grid(const Experiment &exp, const GridSpec &grid, std::span<const BeamId> subset, unsigned threads = 0);

// Reference prediction times (ms) of the 26 GHz testbed campaign, for report annotation only
struct MeasuredPredictionTimes
{
    static constexpr double main_beam = 110.6;
    static constexpr double guard_phi7 = 166.97;
    static constexpr double guard_phi14 = 119.8;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware concurrency)
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn);

} // namespace guardbeam

#endif
