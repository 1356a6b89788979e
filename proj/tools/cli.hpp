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

#ifndef GUARDBEAM_TOOLS_CLI_HPP
#define GUARDBEAM_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace guardbeam::cli
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_user_error = 1,
    exit_io_error = 2
};

struct Streams
{
    std::ostream &out;
    std::ostream &err;
    bool color = false; // ANSI colour on diagnostics
};

// args excludes the program name
int run(const std::vector<std::string> &args, const Streams &io);

} // namespace guardbeam::cli

#endif
