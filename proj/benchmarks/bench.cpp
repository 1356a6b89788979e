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
#include "guardbeam/scenario.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace guardbeam;

static void BM_SlidingStd(benchmark::State &state)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    std::vector<double> v(1 << 16);
    for (auto &x : v)
        x = 1.0 + 0.01 * n(rng);
    const auto w = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(sliding_std(v, w));
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(v.size()));
}
BENCHMARK(BM_SlidingStd)->Arg(10)->Arg(100);

static void BM_ChannelResponse(benchmark::State &state)
{
    const Experiment exp(ExperimentConfig{});
    double y = 0.3;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(channel_response(exp.geometry(), Point2{2.5, y}, exp.config().blocker_radius_m,
                                                  exp.tx_pattern(), exp.beams(), exp.config().scene));
        y = y > 1.0 ? 0.3 : y + 1e-4;
    }
}
BENCHMARK(BM_ChannelResponse);

static void BM_SimulateTrajectory(benchmark::State &state)
{
    const Experiment exp(ExperimentConfig{});
    const auto approach = state.range(0) ? Approach::slow : Approach::nominal;
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_trajectory(exp, 1, ++seed, {approach, false}));
}
BENCHMARK(BM_SimulateTrajectory)->Arg(0)->Arg(1);

static void BM_DetectionRange(benchmark::State &state)
{
    const Experiment exp(beam_presets().front().config);
    for (auto _ : state)
        benchmark::DoNotOptimize(detection_range(exp, exp.config().detector.beams, 50, 1));
}
BENCHMARK(BM_DetectionRange)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
