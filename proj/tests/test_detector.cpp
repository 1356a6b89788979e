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

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace guardbeam;
using std::chrono::milliseconds;

namespace
{
DetectorConfig config(double threshold, long long window_ms = 100, long long dt_ms = 10)
{
    DetectorConfig c;
    c.window = milliseconds{window_ms};
    c.sample_interval = milliseconds{dt_ms};
    c.threshold = threshold;
    return c;
}

Detection stream(const std::vector<double> &levels, const DetectorConfig &cfg)
{
    Detector d(cfg);
    for (const double x : levels)
        d.push(x);
    return d.result();
}
} // namespace

TEST(SlidingStd, ConstantSequenceIsZero)
{
    const std::vector<double> v(50, 0.7);
    for (const double s : sliding_std(v, 10))
        EXPECT_EQ(s, 0.0);
}

TEST(SlidingStd, PopulationConvention)
{
    const std::vector<double> v{0.0, 2.0};
    const auto s = sliding_std(v, 2);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s[0], 1.0);
}

TEST(SlidingStd, WarmUpLength)
{
    const std::vector<double> v(25, 1.0);
    EXPECT_EQ(sliding_std(v, 10).size(), 16u);
    EXPECT_TRUE(sliding_std(std::vector<double>(5, 1.0), 10).empty());
    SlidingStd s(3);
    EXPECT_FALSE(s.push(1.0));
    EXPECT_FALSE(s.push(2.0));
    EXPECT_TRUE(s.push(3.0));
    EXPECT_THROW(SlidingStd(1), Error);
}

TEST(SlidingStd, MatchesTwoPassOracle)
{
    gen::Gen g(41);
    const auto v = g.uniform_vector(100000, 0.0, 1.0);
    const std::size_t w = 10;
    const auto s = sliding_std(v, w);
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        const double ref = oracle::window_std(v, i + w, w);
        EXPECT_LE(std::abs(s[i] - ref), 1e-9 * std::max(ref, 1e-300)) << i;
    }
}

TEST(SlidingStd, LargeOffsetStaysAccurate)
{
    gen::Gen g(42);
    std::vector<double> v(20000);
    for (auto &x : v)
        x = 1e6 + g.uniform(0.0, 1e-3);
    const auto s = sliding_std(v, 16);
    for (std::size_t i = 0; i < s.size(); i += 97)
        EXPECT_NEAR(s[i], oracle::window_std(v, i + 16, 16), 1e-9);
}

TEST(SlidingStd, QuietStretchAfterLoudStretch)
{
    gen::Gen g(7);
    auto v = g.uniform_vector(6000, 0.0, 2.0);
    for (std::size_t k = 3000; k < v.size(); ++k)
        v[k] = 1.0 + 1e-4 * g.normal();
    for (const std::size_t w : {2u, 10u, 64u})
    {
        const auto s = sliding_std(v, w);
        for (std::size_t i = 3000; i < s.size(); ++i)
        {
            const double ref = oracle::window_std(v, i + w, w);
            ASSERT_LE(std::abs(s[i] - ref), 1e-9 * ref) << "w " << w << " i " << i;
        }
    }
}

TEST(DetectorConfig, Validation)
{
    EXPECT_EQ(config(0.03).window_samples(), 10u);
    EXPECT_THROW(config(0.03, 105, 10).validate(), Error);
    EXPECT_THROW(config(0.03, 10, 10).validate(), Error);
    EXPECT_THROW(config(0.0).validate(), Error);
    EXPECT_THROW(config(-1.0).validate(), Error);
    auto c = config(0.03);
    c.beams.clear();
    EXPECT_THROW(c.validate(), Error);
    c.beams = {BeamId::main(), BeamId::main()};
    EXPECT_THROW(c.validate(), Error);
}

TEST(Detect, ConstantTraceNeverTriggers)
{
    const std::vector<double> v(500, 1.0);
    const auto d = detect(v, config(0.03));
    EXPECT_FALSE(d.triggered);
    EXPECT_FALSE(d.index);
    EXPECT_FALSE(d.t_d);
}

TEST(Detect, StepIntoFluctuationMatchesScanOracle)
{
    std::vector<double> v(300, 1.0);
    for (int k = 0; k < 100; ++k)
        v.push_back(k % 2 == 0 ? 1.5 : 0.5);
    const auto d = detect(v, config(0.03));
    const auto ref = oracle::scan_detect(v, 10, 0.03);
    ASSERT_TRUE(d.triggered);
    ASSERT_TRUE(ref);
    EXPECT_EQ(*d.index, *ref);
    EXPECT_EQ(*d.index, 300u); // one fluctuating sample already gives sigma = 0.15
    EXPECT_EQ(d.t_d->count(), 3000);
}

TEST(Detect, ThresholdAboveMaximumNeverTriggers)
{
    gen::Gen g(43);
    const auto v = g.burst_trace(400);
    const auto s = sliding_std(v, 10);
    const double top = *std::max_element(s.begin(), s.end());
    EXPECT_FALSE(detect(v, config(top * 1.0001)).triggered);
    EXPECT_TRUE(detect(v, config(top)).triggered);
}

TEST(Detect, ShortTraceIsInsufficientData)
{
    const std::vector<double> v(9, 1.0);
    try
    {
        detect(v, config(0.03));
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
    }
}

TEST(Detect, LatchesOnFirstCrossing)
{
    Detector d(config(0.1, 20, 10));
    EXPECT_FALSE(d.push(1.0));
    EXPECT_TRUE(d.push(2.0)); // sigma 0.5
    const auto first = d.result();
    EXPECT_TRUE(d.push(2.0));
    EXPECT_TRUE(d.push(5.0));
    EXPECT_EQ(d.result().index, first.index);
    EXPECT_EQ(*first.index, 1u);
    EXPECT_EQ(d.samples_seen(), 4u);
}

TEST(Calibration, ConstantTraceGivesZero)
{
    const std::vector<double> v(200, 1.0);
    EXPECT_EQ(calibrate_threshold(v, 10, 1.2), 0.0);
    EXPECT_EQ(calibrate_threshold(v, 10, 5.0), 0.0);
}

TEST(Calibration, LinearInMultiplier)
{
    gen::Gen g(44);
    std::vector<double> v(5000);
    for (auto &x : v)
        x = 1.0 + 0.01 * g.normal();
    const double a = calibrate_threshold(v, 10, 1.2);
    EXPECT_DOUBLE_EQ(calibrate_threshold(v, 10, 2.4), 2.0 * a);
    EXPECT_GT(a, 0.0);
}

TEST(Calibration, NeedsTenWindows)
{
    const std::vector<double> v(99, 1.0);
    try
    {
        calibrate_threshold(v, 10, 1.2);
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::calibration);
    }
    EXPECT_THROW(calibrate_threshold(std::vector<double>(100, 1.0), 10, 0.0), Error);
}

TEST(Calibration, NoiseQuantileOracleAt19dB)
{
    // |1 + w| with E|w|^2 = 10^(-19.1/10): reference p99 of sigma from many independent traces
    const double noise_rms = std::pow(10.0, -19.1 / 20.0);
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n(0.0, noise_rms / std::sqrt(2.0));
    const auto make = [&](std::size_t len) {
        std::vector<double> v(len);
        for (auto &x : v)
            x = std::abs(std::complex<double>(1.0 + n(rng), n(rng)));
        return v;
    };
    std::vector<double> sigmas;
    for (int t = 0; t < 200; ++t)
    {
        const auto v = make(1000);
        for (std::size_t k = 10; k <= v.size(); ++k)
            sigmas.push_back(oracle::window_std(v, k, 10));
    }
    std::sort(sigmas.begin(), sigmas.end());
    const double p99 = sigmas[static_cast<std::size_t>(0.99 * (sigmas.size() - 1))];

    const auto quiet = make(20000);
    const double th = calibrate_threshold(quiet, 10, 1.2);
    EXPECT_GT(th, p99);
    EXPECT_NEAR(th / (1.2 * p99), 1.0, 0.05);
}

TEST(Quantile, LinearInterpolation)
{
    EXPECT_DOUBLE_EQ(quantile({3.0, 1.0, 2.0, 4.0}, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.25), 2.0);
    EXPECT_DOUBLE_EQ(quantile({7.0}, 0.99), 7.0);
    EXPECT_DOUBLE_EQ(quantile({1.0, 2.0}, 1.0), 2.0);
    EXPECT_THROW(quantile({}, 0.5), Error);
}

TEST(Classify, Examples)
{
    Detection det{true, 83, milliseconds{830}};
    const BlockageTruth truth{milliseconds{1000}, milliseconds{0}};
    auto o = make_outcome(det, truth);
    EXPECT_EQ(o.cls, OutcomeClass::true_detection);
    EXPECT_EQ(o.t_p, milliseconds{170});

    o = make_outcome(det, BlockageTruth{});
    EXPECT_EQ(o.cls, OutcomeClass::false_detection);
    EXPECT_FALSE(o.t_p);

    o = make_outcome(Detection{}, truth);
    EXPECT_EQ(o.cls, OutcomeClass::misdetection);
    EXPECT_EQ(make_outcome(Detection{}, BlockageTruth{}).cls, OutcomeClass::no_event);
}

TEST(Classify, EligibilityAndLateTriggers)
{
    const BlockageTruth truth{milliseconds{2000}, milliseconds{500}};
    EXPECT_EQ(classify({true, 30, milliseconds{300}}, truth), OutcomeClass::false_detection);
    EXPECT_EQ(classify({true, 50, milliseconds{500}}, truth), OutcomeClass::true_detection);
    EXPECT_EQ(classify({true, 200, milliseconds{2000}}, truth), OutcomeClass::misdetection);
    EXPECT_EQ(classify({true, 30, milliseconds{300}}, BlockageTruth{milliseconds{2000}, std::nullopt}),
              OutcomeClass::false_detection);
    for (const auto c : {OutcomeClass::true_detection, OutcomeClass::false_detection, OutcomeClass::misdetection,
                         OutcomeClass::no_event})
        EXPECT_EQ(parse_outcome_class(to_string(c)), c);
    EXPECT_FALSE(parse_outcome_class("bogus"));
}

TEST(DetectorProperty, MonotoneInThreshold)
{
    gen::Gen g(45);
    for (int t = 0; t < 200; ++t)
    {
        const auto v = g.burst_trace(300);
        std::optional<std::size_t> prev;
        bool prev_triggered = true;
        for (double th = 0.001; th < 0.5; th *= 1.3)
        {
            const auto d = detect(v, config(th));
            if (!prev_triggered)
                EXPECT_FALSE(d.triggered);
            if (prev && d.index)
                EXPECT_GE(*d.index, *prev);
            prev = d.index;
            prev_triggered = d.triggered;
        }
    }
}

TEST(DetectorProperty, WiderWindowDelaysWarmUp)
{
    gen::Gen g(46);
    const auto v = g.uniform_vector(200, 0.0, 1.0);
    for (std::size_t w = 2; w < 50; ++w)
    {
        EXPECT_EQ(v.size() - sliding_std(v, w).size(), w - 1);
        EXPECT_GE(v.size() - sliding_std(v, w + 1).size(), v.size() - sliding_std(v, w).size());
    }
}

TEST(DetectorProperty, StreamingEqualsBatch)
{
    gen::Gen g(47);
    for (int t = 0; t < 500; ++t)
    {
        const auto v = g.burst_trace(static_cast<std::size_t>(g.integer(10, 600)));
        const auto cfg = config(g.uniform(0.005, 0.2), 10 * g.integer(2, 20));
        if (v.size() < cfg.window_samples())
            continue;
        const auto a = detect(v, cfg);
        const auto b = stream(v, cfg);
        EXPECT_EQ(a.triggered, b.triggered);
        EXPECT_EQ(a.index, b.index);
        EXPECT_EQ(a.t_d, b.t_d);
    }
}

TEST(DetectorProperty, ScaleCovariance)
{
    gen::Gen g(48);
    for (int t = 0; t < 200; ++t)
    {
        const auto v = g.burst_trace(300);
        const double th = g.uniform(0.005, 0.2);
        const auto base = detect(v, config(th));
        for (const double c : {1e-3, 1.0, 1e3})
        {
            std::vector<double> scaled(v);
            for (auto &x : scaled)
                x *= c;
            EXPECT_EQ(detect(scaled, config(th * c)).index, base.index) << "c=" << c;
        }
    }
}

TEST(DetectorProperty, TruePredictionTimesArePositive)
{
    gen::Gen g(49);
    for (int t = 0; t < 500; ++t)
    {
        const auto v = g.burst_trace(300);
        const auto det = detect(v, config(0.03));
        const BlockageTruth truth{milliseconds{10 * g.integer(0, 3000)}, milliseconds{10 * g.integer(0, 1000)}};
        const auto o = make_outcome(det, truth);
        if (o.cls == OutcomeClass::true_detection)
            EXPECT_GT(o.t_p->count(), 0);
        if (o.t_s && o.t_d)
            EXPECT_EQ(*o.t_p, *o.t_s - *o.t_d);
    }
}
