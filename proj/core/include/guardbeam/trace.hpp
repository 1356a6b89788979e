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

#ifndef GUARDBEAM_TRACE_HPP
#define GUARDBEAM_TRACE_HPP

#include "guardbeam/detector.hpp"
#include "guardbeam/scenario.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace guardbeam
{

// Rectangular per-beam complex trace. CSV layout: header "t_ms,beam,i,q", one row per
// (timestamp, beam), timestamps strictly increasing with a constant stride, every
// timestamp carrying the same beams in the same order.
struct TraceFile
{
    std::vector<BeamId> beams;
    std::vector<milliseconds> times;
    std::vector<std::vector<std::complex<double>>> values; // [beam][k]

    std::optional<milliseconds> stride() const noexcept;
    std::vector<double> levels(std::span<const BeamId> subset) const;
};

TraceFile to_trace_file(const TrajectoryTrace &trace);

void write_trace(std::ostream &out, const TraceFile &trace);
// Throws Error(parse) naming the first offending line
TraceFile read_trace(std::istream &in);

// Sidecar "<trace>.meta": meta.* keys followed by the effective config echo
struct TraceMeta
{
    std::optional<milliseconds> t_s;
    std::optional<milliseconds> eligible_from;
    std::optional<int> trajectory;
    std::optional<std::uint64_t> seed;
    std::string config_echo;

    BlockageTruth truth() const { return {t_s, eligible_from}; }
};

void write_meta(std::ostream &out, const TraceMeta &meta);
TraceMeta read_meta(std::istream &in);

std::filesystem::path meta_path(const std::filesystem::path &trace_path);

} // namespace guardbeam

#endif
