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

#ifndef GUARDBEAM_CONFIG_HPP
#define GUARDBEAM_CONFIG_HPP

#include "guardbeam/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace guardbeam
{

// Flat "key = value" documents with dotted lowercase keys, '#' starts a comment.
// Missing keys keep their defaults; unknown or repeated keys are errors (ErrorKind::parse).
//
//   scene.frequency_ghz = 26
//   beam.guard_count = 1
//   beam.guard1.steering_deg = 14
//   detector.sigma_th = table        # table | calibrated | <number>
//   detector.beams = main+guard1
//   trajectory.count = 1
//   trajectory.1.start_x_m = 2.5
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path &path); // Error(io) when unreadable

// Every key with its effective value; parse_config(echo_config(c)) == c
std::string echo_config(const ExperimentConfig &cfg);

// FNV-1a of the echo; identifies configs for the trace cache
std::uint64_t config_fingerprint(const ExperimentConfig &cfg);

std::string format_beam_subset(std::span<const BeamId> beams);
std::vector<BeamId> parse_beam_subset(std::string_view text); // "main+guard1" or "main,guard1"

} // namespace guardbeam

#endif
