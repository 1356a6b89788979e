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

#include "guardbeam/trace.hpp"

#include "guardbeam/error.hpp"
#include "guardbeam/textio.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace guardbeam
{

namespace
{
[[noreturn]] void fail(long long line, const std::string &msg)
{
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + msg);
}
} // namespace

std::optional<milliseconds> TraceFile::stride() const noexcept
{
    if (times.size() < 2)
        return std::nullopt;
    return times[1] - times[0];
}

std::vector<double> TraceFile::levels(std::span<const BeamId> subset) const
{
    if (subset.empty())
        throw Error(ErrorKind::invalid_config, "beam subset is empty");
    std::vector<std::size_t> slots;
    for (const auto id : subset)
    {
        const auto it = std::find(beams.begin(), beams.end(), id);
        if (it == beams.end())
            throw Error(ErrorKind::invalid_config, "beam " + to_string(id) + " is not in the trace");
        slots.push_back(static_cast<std::size_t>(it - beams.begin()));
    }
    std::vector<double> out(times.size());
    std::vector<std::complex<double>> v(slots.size());
    for (std::size_t k = 0; k < out.size(); ++k)
    {
        for (std::size_t j = 0; j < slots.size(); ++j)
            v[j] = values[slots[j]][k];
        out[k] = combined_level(v);
    }
    return out;
}

TraceFile to_trace_file(const TrajectoryTrace &trace)
{
    TraceFile f;
    f.beams = trace.beams;
    f.values = trace.samples;
    f.times.reserve(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k)
        f.times.push_back(static_cast<long long>(k) * trace.sample_interval);
    return f;
}

void write_trace(std::ostream &out, const TraceFile &trace)
{
    out << "t_ms,beam,i,q\n";
    std::vector<std::string> names;
    for (const auto id : trace.beams)
        names.push_back(to_string(id));
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        for (std::size_t b = 0; b < trace.beams.size(); ++b)
        {
            const auto v = trace.values[b][k];
            out << trace.times[k].count() << ',' << names[b] << ',' << format_double(v.real()) << ','
                << format_double(v.imag()) << '\n';
        }
    if (!out)
        throw Error(ErrorKind::io, "error writing trace");
}

TraceFile read_trace(std::istream &in)
{
    TraceFile f;
    std::string line;
    long long line_no = 0;
    if (!std::getline(in, line))
        fail(1, "missing header");
    ++line_no;
    if (trim(line) != "t_ms,beam,i,q")
        fail(line_no, "expected header 't_ms,beam,i,q'");

    bool first_group_open = true;
    std::size_t pos_in_group = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto text = trim(line);
        if (text.empty())
            fail(line_no, "empty row");
        const auto fields = split(text, ',');
        if (fields.size() != 4)
            fail(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        const auto t = parse_int(fields[0]);
        if (!t)
            fail(line_no, "invalid timestamp '" + std::string(fields[0]) + "'");
        const auto beam = parse_beam_id(trim(fields[1]));
        if (!beam)
            fail(line_no, "unknown beam '" + std::string(fields[1]) + "'");
        const auto re = parse_double(fields[2]);
        const auto im = parse_double(fields[3]);
        if (!re || !im)
            fail(line_no, "invalid complex sample");
        const milliseconds tm{*t};

        if (f.times.empty() || tm != f.times.back())
        {
            if (!f.times.empty())
            {
                if (tm < f.times.back())
                    fail(line_no, "non-monotone time");
                if (pos_in_group != f.beams.size())
                    fail(line_no, "ragged rows: timestamp " + std::to_string(f.times.back().count()) +
                                      " is missing beam " + to_string(f.beams[pos_in_group]));
                first_group_open = false;
                if (f.times.size() >= 2 && tm - f.times.back() != f.times[1] - f.times[0])
                    fail(line_no, "inconsistent sample stride");
            }
            f.times.push_back(tm);
            pos_in_group = 0;
        }

        if (first_group_open)
        {
            if (std::find(f.beams.begin(), f.beams.end(), *beam) != f.beams.end())
                fail(line_no, "duplicate beam " + to_string(*beam) + " at one timestamp");
            f.beams.push_back(*beam);
            f.values.emplace_back();
        }
        else if (pos_in_group >= f.beams.size() || f.beams[pos_in_group] != *beam)
            fail(line_no, "ragged rows: unexpected beam " + to_string(*beam));
        f.values[pos_in_group].emplace_back(*re, *im);
        ++pos_in_group;
    }
    if (f.times.empty())
        fail(line_no + 1, "trace has no samples");
    if (pos_in_group != f.beams.size())
        fail(line_no + 1, "ragged rows: final timestamp is missing beam " + to_string(f.beams[pos_in_group]));
    return f;
}

void write_meta(std::ostream &out, const TraceMeta &meta)
{
    if (meta.trajectory)
        out << "meta.trajectory = " << *meta.trajectory << '\n';
    if (meta.seed)
        out << "meta.seed = " << *meta.seed << '\n';
    if (meta.t_s)
        out << "meta.t_s_ms = " << meta.t_s->count() << '\n';
    if (meta.eligible_from)
        out << "meta.eligible_from_ms = " << meta.eligible_from->count() << '\n';
    out << meta.config_echo;
    if (!out)
        throw Error(ErrorKind::io, "error writing trace metadata");
}

TraceMeta read_meta(std::istream &in)
{
    TraceMeta meta;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto text = trim(line);
        if (text.substr(0, 5) != "meta.")
        {
            meta.config_echo += line;
            meta.config_echo += '\n';
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
            fail(line_no, "expected 'key = value'");
        const auto key = trim(text.substr(0, eq));
        const auto value = trim(text.substr(eq + 1));
        if (key == "meta.seed")
        {
            const auto s = parse_uint64(value);
            if (!s)
                fail(line_no, "invalid seed");
            meta.seed = *s;
            continue;
        }
        const auto v = parse_int(value);
        if (!v)
            fail(line_no, "invalid integer '" + std::string(value) + "'");
        if (key == "meta.trajectory")
            meta.trajectory = static_cast<int>(*v);
        else if (key == "meta.t_s_ms")
            meta.t_s = milliseconds{*v};
        else if (key == "meta.eligible_from_ms")
            meta.eligible_from = milliseconds{*v};
        else
            fail(line_no, "unknown metadata key '" + std::string(key) + "'");
    }
    return meta;
}

std::filesystem::path meta_path(const std::filesystem::path &trace_path)
{
    auto p = trace_path;
    p += ".meta";
    return p;
}

} // namespace guardbeam
