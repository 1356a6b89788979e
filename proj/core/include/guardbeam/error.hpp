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

#ifndef GUARDBEAM_ERROR_HPP
#define GUARDBEAM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace guardbeam
{

enum class ErrorKind
{
    invalid_geometry,    // degenerate link (d_o = 0) or coincident points
    domain,              // argument outside the mathematical domain of a formula
    capability,          // request cannot be met by the model (e.g. HPBW too narrow)
    out_of_model,        // blocker inside the shadowing area
    invalid_calibration, // non-positive normalization baseline
    invalid_config,      // bad configuration value or beam subset
    insufficient_data,   // trace shorter than one detection window
    calibration,         // not enough quiescent data to calibrate a threshold
    invalid_scenario,    // trajectory starts inside the shadowing area
    parse,               // malformed config or trace file
    io                   // file could not be read or written
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace guardbeam

#endif
