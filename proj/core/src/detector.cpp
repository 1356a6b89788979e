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

#include "guardbeam/detector.hpp"
#include "guardbeam/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace guardbeam
{

std::size_t DetectorConfig::window_samples() const
{
    validate();
    return static_cast<std::size_t>(window / sample_interval);
}

void DetectorConfig::validate() const
{
    if (sample_interval.count() <= 0)
        throw Error(ErrorKind::invalid_config, "sample interval must be positive");
    if (window < sample_interval || window.count() % sample_interval.count() != 0)
        throw Error(ErrorKind::invalid_config, "window must be an integer multiple of the sample interval");
    if (window / sample_interval < 2)
        throw Error(ErrorKind::invalid_config, "window must span at least two samples");
    if (!(threshold > 0.0) || !std::isfinite(threshold))
        throw Error(ErrorKind::invalid_config, "threshold must be positive");
    if (beams.empty())
        throw Error(ErrorKind::invalid_config, "empty beam subset");
    if (std::set<BeamId>(beams.begin(), beams.end()).size() != beams.size())
        throw Error(ErrorKind::invalid_config, "duplicate beam in subset");
}

SlidingStd::SlidingStd(std::size_t window) : buffer_(window, 0.0)
{
    if (window < 2)
        throw Error(ErrorKind::invalid_config, "sliding window needs at least two samples");
}

void SlidingStd::reset() noexcept
{
    std::fill(buffer_.begin(), buffer_.end(), 0.0);
    head_ = 0;
    count_ = 0;
    mean_ = 0.0;
    m2_ = 0.0;
    rounding_ = 0.0;
}

void SlidingStd::refresh() noexcept
{
    double sum = 0.0;
    for (double v : buffer_)
        sum += v;
    const double m = sum / static_cast<double>(buffer_.size());
    shift_ += m;
    m2_ = 0.0;
    for (double &v : buffer_)
    {
        v -= m;
        m2_ += v * v;
    }
    mean_ = 0.0;
    rounding_ = 0.0;
}

std::optional<double> SlidingStd::push(double x)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const std::size_t w = buffer_.size();
    // Samples are stored relative to shift_ so a large common offset does not cancel
    if (count_ == 0)
        shift_ = x;
    const double d = x - shift_;
    const double old = buffer_[head_];
    buffer_[head_] = d;
    head_ = (head_ + 1) % w;
    ++count_;
    if (count_ <= w)
    {
        // Welford warm-up
        const double delta = d - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (d - mean_);
        if (count_ == w)
            refresh();
    }
    else
    {
        const double mean_new = mean_ + (d - old) / static_cast<double>(w);
        const double inc = (d - old) * ((d - mean_new) + (old - mean_));
        m2_ += inc;
        mean_ = mean_new;
        // Bound on the rounding accumulated since the last exact pass; a shrinking m2 after a
        // loud stretch is where the O(1) update cancels
        rounding_ += 4.0 * eps * (std::abs(inc) + std::abs(m2_) + std::abs(d - old) * std::abs(mean_));
        if (count_ % kRefreshInterval == 0 || rounding_ > kRelativeTolerance * m2_)
            refresh();
    }
    if (m2_ < 0.0)
        m2_ = 0.0;
    if (count_ < w)
        return std::nullopt;
    return std::sqrt(m2_ / static_cast<double>(w));
}

std::vector<double> sliding_std(std::span<const double> levels, std::size_t window)
{
    SlidingStd acc(window);
    std::vector<double> out;
    if (levels.size() >= window)
        out.reserve(levels.size() - window + 1);
    for (double x : levels)
    {
        if (auto s = acc.push(x))
            out.push_back(*s);
    }
    return out;
}

Detector::Detector(const DetectorConfig &cfg) : cfg_(cfg), std_(cfg.window_samples()) {}

bool Detector::push(double level)
{
    const std::size_t index = seen_++;
    if (result_.triggered)
        return true;
    last_sigma_ = std_.push(level);
    if (last_sigma_ && *last_sigma_ >= cfg_.threshold)
    {
        result_.triggered = true;
        result_.index = index;
        result_.t_d = cfg_.sample_interval * static_cast<long long>(index);
    }
    return result_.triggered;
}

Detection detect(std::span<const double> levels, const DetectorConfig &cfg)
{
    const std::size_t w = cfg.window_samples();
    if (levels.size() < w)
        throw Error(ErrorKind::insufficient_data, "insufficient data: trace shorter than one detection window");
    const std::vector<double> sigma = sliding_std(levels, w);
    Detection out;
    for (std::size_t i = 0; i < sigma.size(); ++i)
    {
        if (sigma[i] >= cfg.threshold)
        {
            out.triggered = true;
            out.index = i + w - 1;
            out.t_d = cfg.sample_interval * static_cast<long long>(*out.index);
            break;
        }
    }
    return out;
}

double quantile(std::vector<double> values, double q)
{
    if (values.empty())
        throw Error(ErrorKind::insufficient_data, "quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double calibrate_threshold(std::span<const double> quiescent_levels, std::size_t window, double multiplier)
{
    if (!(multiplier > 0.0))
        throw Error(ErrorKind::invalid_config, "calibration multiplier must be positive");
    if (quiescent_levels.size() < 10 * window)
        throw Error(ErrorKind::calibration, "calibration needs at least ten windows of quiescent data");
    return multiplier * quantile(sliding_std(quiescent_levels, window), 0.99);
}

std::string_view to_string(OutcomeClass c) noexcept
{
    switch (c)
    {
    case OutcomeClass::true_detection:
        return "true_detection";
    case OutcomeClass::false_detection:
        return "false_detection";
    case OutcomeClass::misdetection:
        return "misdetection";
    case OutcomeClass::no_event:
        return "no_event";
    }
    return "no_event";
}

std::optional<OutcomeClass> parse_outcome_class(std::string_view text) noexcept
{
    for (OutcomeClass c : {OutcomeClass::true_detection, OutcomeClass::false_detection, OutcomeClass::misdetection,
                           OutcomeClass::no_event})
    {
        if (to_string(c) == text)
            return c;
    }
    return std::nullopt;
}

OutcomeClass classify(const Detection &det, const BlockageTruth &truth) noexcept
{
    if (!truth.t_s)
        return det.triggered ? OutcomeClass::false_detection : OutcomeClass::no_event;
    if (!det.triggered || !det.t_d || *det.t_d >= *truth.t_s)
        return OutcomeClass::misdetection;
    if (truth.eligible_from && *det.t_d >= *truth.eligible_from)
        return OutcomeClass::true_detection;
    return OutcomeClass::false_detection;
}

DetectionOutcome make_outcome(const Detection &det, const BlockageTruth &truth) noexcept
{
    DetectionOutcome out;
    out.triggered = det.triggered;
    out.t_d = det.t_d;
    out.t_s = truth.t_s;
    if (out.t_d && out.t_s)
        out.t_p = *out.t_s - *out.t_d;
    out.cls = classify(det, truth);
    return out;
}

} // namespace guardbeam
