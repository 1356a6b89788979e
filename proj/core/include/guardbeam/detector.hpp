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

#ifndef GUARDBEAM_DETECTOR_HPP
#define GUARDBEAM_DETECTOR_HPP

#include "guardbeam/channel.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace guardbeam
{

using std::chrono::milliseconds;

struct DetectorConfig
{
    milliseconds window{100};
    milliseconds sample_interval{10};
    double threshold = 0.03; // on the normalized level scale
    std::vector<BeamId> beams{BeamId::main()};

    // W = window / sample_interval; the window at sample k covers samples k-W+1 .. k
    std::size_t window_samples() const;
    void validate() const;
    friend bool operator==(const DetectorConfig &, const DetectorConfig &) = default;
};

// Population standard deviation over the trailing W samples, updated in O(1) per sample.
// The running moments are re-anchored from the buffer periodically to bound drift.
class SlidingStd
{
public:
    explicit SlidingStd(std::size_t window);

    // Returns sigma once W samples have been seen
    std::optional<double> push(double x);
    std::size_t window() const noexcept { return buffer_.size(); }
    std::size_t count() const noexcept { return count_; }
    void reset() noexcept;

private:
    static constexpr std::size_t kRefreshInterval = 4096;
    static constexpr double kRelativeTolerance = 1e-11;

    void refresh() noexcept;

    std::vector<double> buffer_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double shift_ = 0.0;
    double rounding_ = 0.0;
};

// Output element i belongs to sample i + W - 1 (warm-up samples produce no value)
std::vector<double> sliding_std(std::span<const double> levels, std::size_t window);

struct Detection
{
    bool triggered = false;
    std::optional<std::size_t> index; // sample index of t_d
    std::optional<milliseconds> t_d;
};

// Streaming form of the detector; latches on the first crossing sigma >= threshold
class Detector
{
public:
    explicit Detector(const DetectorConfig &cfg);

    // Returns true once the detector has triggered (on this or an earlier sample)
    bool push(double level);
    const Detection &result() const noexcept { return result_; }
    std::optional<double> last_sigma() const noexcept { return last_sigma_; }
    std::size_t samples_seen() const noexcept { return seen_; }

private:
    DetectorConfig cfg_;
    SlidingStd std_;
    Detection result_;
    std::optional<double> last_sigma_;
    std::size_t seen_ = 0;
};

// Batch form; throws Error(insufficient_data) when levels.size() < W
Detection detect(std::span<const double> levels, const DetectorConfig &cfg);

// k times the 99th percentile of sigma over a blocker-free trace (needs >= 10 W samples)
double calibrate_threshold(std::span<const double> quiescent_levels, std::size_t window, double multiplier = 1.2);

// Linear-interpolation quantile of unsorted data, q in [0, 1]
double quantile(std::vector<double> values, double q);

enum class OutcomeClass
{
    true_detection,
    false_detection,
    misdetection,
    no_event
};

std::string_view to_string(OutcomeClass c) noexcept;
std::optional<OutcomeClass> parse_outcome_class(std::string_view text) noexcept;

// Ground truth of one run. eligible_from is when the blocker entered the eligibility region
// (within the configured perpendicular distance of the link); absent if it never did.
struct BlockageTruth
{
    std::optional<milliseconds> t_s;
    std::optional<milliseconds> eligible_from;
};

OutcomeClass classify(const Detection &det, const BlockageTruth &truth) noexcept;

struct DetectionOutcome
{
    bool triggered = false;
    std::optional<milliseconds> t_d;
    std::optional<milliseconds> t_s;
    std::optional<milliseconds> t_p; // t_s - t_d
    OutcomeClass cls = OutcomeClass::no_event;
};

DetectionOutcome make_outcome(const Detection &det, const BlockageTruth &truth) noexcept;

} // namespace guardbeam

#endif
