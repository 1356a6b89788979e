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

#include "guardbeam/error.hpp"

namespace guardbeam
{

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::invalid_geometry:
        return "invalid geometry";
    case ErrorKind::domain:
        return "domain error";
    case ErrorKind::capability:
        return "capability error";
    case ErrorKind::out_of_model:
        return "out of model";
    case ErrorKind::invalid_calibration:
        return "invalid calibration";
    case ErrorKind::invalid_config:
        return "invalid config";
    case ErrorKind::insufficient_data:
        return "insufficient data";
    case ErrorKind::calibration:
        return "calibration error";
    case ErrorKind::invalid_scenario:
        return "invalid scenario";
    case ErrorKind::parse:
        return "parse error";
    case ErrorKind::io:
        return "I/O error";
    }
    return "error";
}

} // namespace guardbeam
