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

#include "guardbeam/config.hpp"

#include "guardbeam/error.hpp"
#include "guardbeam/textio.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace guardbeam
{

namespace
{
struct Entry
{
    std::string value;
    int line = 0;
};

using Getter = std::function<std::string(const ExperimentConfig &)>;
using Setter = std::function<void(ExperimentConfig &, std::string_view)>;

struct Field
{
    std::string key;
    Getter get;
    Setter set;
};

[[noreturn]] void bad_value(std::string_view v, const char *what)
{
    throw Error(ErrorKind::parse, "invalid value '" + std::string(v) + "' (expected " + what + ")");
}

double to_double(std::string_view v)
{
    const auto d = parse_double(v);
    if (!d)
        bad_value(v, "a number");
    return *d;
}

long long to_int(std::string_view v)
{
    const auto i = parse_int(v);
    if (!i)
        bad_value(v, "an integer");
    return *i;
}

bool to_bool(std::string_view v)
{
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    bad_value(v, "true or false");
}

Field num(std::string key, double ExperimentConfig::*outer)
{
    return {std::move(key), [outer](const ExperimentConfig &c) { return format_double_short(c.*outer); },
            [outer](ExperimentConfig &c, std::string_view v) { c.*outer = to_double(v); }};
}

template <class F>
Field num_at(std::string key, F ref)
{
    return {std::move(key), [ref](const ExperimentConfig &c) { return format_double_short(ref(c)); },
            [ref](ExperimentConfig &c, std::string_view v) { ref(c) = to_double(v); }};
}

std::string threshold_text(const ThresholdSetting &t)
{
    switch (t.mode)
    {
    case ThresholdMode::table: return "table";
    case ThresholdMode::calibrated: return "calibrated";
    case ThresholdMode::fixed: return format_double_short(t.value);
    }
    return "table";
}

ThresholdSetting parse_threshold(std::string_view v)
{
    if (v == "table" || v == "auto")
        return {ThresholdMode::table, 0.03};
    if (v == "calibrated")
        return {ThresholdMode::calibrated, 0.03};
    return {ThresholdMode::fixed, to_double(v)};
}

// Fields independent of the guard and trajectory lists, in echo order
std::vector<Field> scalar_fields()
{
    std::vector<Field> f;
    f.push_back({"scene.frequency_ghz", nullptr,
                 [](ExperimentConfig &c, std::string_view v) { c.scene.frequency_hz = to_double(v) * 1e9; }});
    f.push_back({"scene.frequency_hz", nullptr,
                 [](ExperimentConfig &c, std::string_view v) { c.scene.frequency_hz = to_double(v); }});
    f.push_back(num_at("scene.tx_power_mw", [](auto &c) -> auto & { return c.scene.tx_power_mw; }));
    f.push_back(
        num_at("scene.reflection_coeff", [](auto &c) -> auto & { return c.scene.reflection_coeff; }));
    f.push_back(num_at("scene.noise_dbm", [](auto &c) -> auto & { return c.scene.noise_dbm; }));
    f.push_back({"scene.n_reflectors", [](const ExperimentConfig &c) { return std::to_string(c.scene.n_reflectors); },
                 [](ExperimentConfig &c, std::string_view v) { c.scene.n_reflectors = static_cast<int>(to_int(v)); }});
    f.push_back({"scene.array_gain",
                 [](const ExperimentConfig &c) { return std::string(c.scene.array_gain ? "true" : "false"); },
                 [](ExperimentConfig &c, std::string_view v) { c.scene.array_gain = to_bool(v); }});
    f.push_back(num_at("geometry.tx_x_m", [](auto &c) -> auto & { return c.tx.x; }));
    f.push_back(num_at("geometry.tx_y_m", [](auto &c) -> auto & { return c.tx.y; }));
    f.push_back(num_at("geometry.rx_x_m", [](auto &c) -> auto & { return c.rx.x; }));
    f.push_back(num_at("geometry.rx_y_m", [](auto &c) -> auto & { return c.rx.y; }));
    f.push_back(num("blocker.radius_m", &ExperimentConfig::blocker_radius_m));
    f.push_back(num("beam.element_spacing", &ExperimentConfig::element_spacing));
    f.push_back(num("beam.tx.hpbw_deg", &ExperimentConfig::tx_hpbw_deg));
    f.push_back(num_at("beam.main.hpbw_deg", [](auto &c) -> auto & { return c.main.hpbw_deg; }));
    f.push_back({"detector.window_ms", [](const ExperimentConfig &c) { return std::to_string(c.detector.window.count()); },
                 [](ExperimentConfig &c, std::string_view v) { c.detector.window = milliseconds{to_int(v)}; }});
    f.push_back({"detector.sample_interval_ms",
                 [](const ExperimentConfig &c) { return std::to_string(c.detector.sample_interval.count()); },
                 [](ExperimentConfig &c, std::string_view v) { c.detector.sample_interval = milliseconds{to_int(v)}; }});
    f.push_back({"detector.sigma_th", [](const ExperimentConfig &c) { return threshold_text(c.detector.threshold); },
                 [](ExperimentConfig &c, std::string_view v) { c.detector.threshold = parse_threshold(v); }});
    f.push_back({"detector.beams", [](const ExperimentConfig &c) { return format_beam_subset(c.detector.beams); },
                 [](ExperimentConfig &c, std::string_view v) { c.detector.beams = parse_beam_subset(v); }});
    f.push_back(num_at("detector.calibration_k",
                       [](auto &c) -> auto & { return c.detector.calibration_multiplier; }));
    f.push_back(
        num_at("detector.eligibility_m", [](auto &c) -> auto & { return c.detector.eligibility_m; }));
    f.push_back(num("experiment.duration_s", &ExperimentConfig::duration_s));
    f.push_back({"experiment.runs", [](const ExperimentConfig &c) { return std::to_string(c.monte_carlo_runs); },
                 [](ExperimentConfig &c, std::string_view v) {
                     const auto n = to_int(v);
                     if (n < 1 || n > 100000000)
                         bad_value(v, "a run count in [1, 1e8]");
                     c.monte_carlo_runs = static_cast<int>(n);
                 }});
    f.push_back({"experiment.seed", [](const ExperimentConfig &c) { return std::to_string(c.seed); },
                 [](ExperimentConfig &c, std::string_view v) {
                     const auto s = parse_uint64(v);
                     if (!s)
                         bad_value(v, "an unsigned 64-bit integer");
                     c.seed = *s;
                 }});
    f.push_back(num("experiment.speed_jitter", &ExperimentConfig::speed_jitter));
    f.push_back(num("experiment.range_speed_mps", &ExperimentConfig::range_speed_mps));
    f.push_back(num("experiment.start_distance_m", &ExperimentConfig::start_distance_m));
    f.push_back(num("experiment.speed_mps", &ExperimentConfig::speed_mps));
    return f;
}

BeamSpec default_guard(std::size_t k) // k is 1-based
{
    return {7.0, 7.0 * static_cast<double>(k), BeamRole::rx_guard};
}

std::size_t to_count(std::string_view v, std::size_t max)
{
    const auto n = to_int(v);
    if (n < 0 || static_cast<unsigned long long>(n) > max)
        bad_value(v, "a small non-negative count");
    return static_cast<std::size_t>(n);
}

// "beam.guard3.hpbw_deg" -> (3, "hpbw_deg"); "trajectory.2.speed_mps" -> (2, "speed_mps")
std::optional<std::pair<std::size_t, std::string>> indexed_key(std::string_view key, std::string_view prefix)
{
    if (key.substr(0, prefix.size()) != prefix)
        return std::nullopt;
    key.remove_prefix(prefix.size());
    const auto dot = key.find('.');
    if (dot == std::string_view::npos || dot == 0)
        return std::nullopt;
    const auto digits = key.substr(0, dot);
    if (digits.front() == '0' || digits.find_first_not_of("0123456789") != std::string_view::npos)
        return std::nullopt;
    const auto k = parse_int(digits);
    if (!k || *k < 1)
        return std::nullopt;
    return std::pair{static_cast<std::size_t>(*k), std::string(key.substr(dot + 1))};
}

constexpr std::size_t kMaxListed = 64;
} // namespace

std::string format_beam_subset(std::span<const BeamId> beams)
{
    std::string out;
    for (const auto id : beams)
    {
        if (!out.empty())
            out += '+';
        out += to_string(id);
    }
    return out;
}

std::vector<BeamId> parse_beam_subset(std::string_view text)
{
    std::vector<BeamId> out;
    std::string norm(text);
    for (auto &ch : norm)
        if (ch == ',')
            ch = '+';
    for (const auto part : split(norm, '+'))
    {
        const auto id = parse_beam_id(trim(part));
        if (!id)
            throw Error(ErrorKind::invalid_config, "unknown beam id '" + std::string(trim(part)) + "'");
        out.push_back(*id);
    }
    return out;
}

ExperimentConfig parse_config(std::string_view text)
{
    std::map<std::string, Entry, std::less<>> entries;
    int line_no = 0;
    for (auto line : split(text, '\n'))
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty())
            throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": empty key or value");
        if (!entries.try_emplace(key, Entry{value, line_no}).second)
            throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }

    ExperimentConfig cfg;
    const auto apply = [&](const std::string &key, const Entry &e, const Setter &set) {
        try
        {
            set(cfg, e.value);
        }
        catch (const Error &err)
        {
            throw Error(ErrorKind::parse, "line " + std::to_string(e.line) + ": " + key + ": " + err.what());
        }
    };

    std::map<std::string, bool, std::less<>> used;
    for (const auto &[key, e] : entries)
        used[key] = false;
    const auto consume = [&](const std::string &key, const Setter &set) {
        const auto it = entries.find(key);
        if (it == entries.end())
            return false;
        apply(key, it->second, set);
        used[key] = true;
        return true;
    };

    if (entries.count("scene.frequency_ghz") && entries.count("scene.frequency_hz"))
        throw Error(ErrorKind::parse, "line " + std::to_string(entries.at("scene.frequency_hz").line) +
                                          ": scene.frequency_hz and scene.frequency_ghz are exclusive");
    for (const auto &f : scalar_fields())
        consume(f.key, f.set);

    std::size_t guard_count = cfg.guards.size();
    consume("beam.guard_count", [&](ExperimentConfig &, std::string_view v) { guard_count = to_count(v, kMaxListed); });
    cfg.guards.clear();
    for (std::size_t k = 1; k <= guard_count; ++k)
    {
        BeamSpec g = default_guard(k);
        const std::string base = "beam.guard" + std::to_string(k) + ".";
        consume(base + "hpbw_deg", [&](ExperimentConfig &, std::string_view v) { g.hpbw_deg = to_double(v); });
        consume(base + "steering_deg", [&](ExperimentConfig &, std::string_view v) { g.steering_deg = to_double(v); });
        cfg.guards.push_back(g);
    }

    const auto defaults = default_trajectories(cfg.tx, cfg.rx, cfg.start_distance_m, cfg.speed_mps);
    std::size_t traj_count = defaults.size();
    consume("trajectory.count", [&](ExperimentConfig &, std::string_view v) { traj_count = to_count(v, kMaxListed); });
    cfg.trajectories.clear();
    for (std::size_t k = 1; k <= traj_count; ++k)
    {
        Trajectory t = defaults[(k - 1) % defaults.size()];
        const std::string base = "trajectory." + std::to_string(k) + ".";
        consume(base + "start_x_m", [&](ExperimentConfig &, std::string_view v) { t.start.x = to_double(v); });
        consume(base + "start_y_m", [&](ExperimentConfig &, std::string_view v) { t.start.y = to_double(v); });
        consume(base + "heading_deg", [&](ExperimentConfig &, std::string_view v) { t.heading_deg = to_double(v); });
        consume(base + "speed_mps", [&](ExperimentConfig &, std::string_view v) { t.speed_mps = to_double(v); });
        cfg.trajectories.push_back(t);
    }

    for (const auto &[key, was_used] : used)
        if (!was_used)
        {
            const auto &e = entries.at(key);
            const bool listed = indexed_key(key, "beam.guard") || indexed_key(key, "trajectory.");
            throw Error(ErrorKind::parse, "line " + std::to_string(e.line) + ": " +
                                              (listed ? "key '" + key + "' is beyond the declared count"
                                                      : "unknown config key '" + key + "'"));
        }

    try
    {
        cfg.validate();
    }
    catch (const Error &err)
    {
        throw Error(ErrorKind::invalid_config, err.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, "cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw Error(ErrorKind::io, "error reading config file '" + path.string() + "'");
    return parse_config(ss.str());
}

std::string echo_config(const ExperimentConfig &cfg)
{
    std::string out;
    const auto line = [&](const std::string &key, const std::string &value) { out += key + " = " + value + "\n"; };

    const double ghz = cfg.scene.frequency_hz / 1e9;
    if (parse_double(format_double_short(ghz)).value_or(0.0) * 1e9 == cfg.scene.frequency_hz)
        line("scene.frequency_ghz", format_double_short(ghz));
    else
        line("scene.frequency_hz", format_double_short(cfg.scene.frequency_hz));
    for (const auto &f : scalar_fields())
        if (f.get)
            line(f.key, f.get(cfg));
    line("beam.guard_count", std::to_string(cfg.guards.size()));
    for (std::size_t k = 0; k < cfg.guards.size(); ++k)
    {
        const std::string base = "beam.guard" + std::to_string(k + 1) + ".";
        line(base + "hpbw_deg", format_double_short(cfg.guards[k].hpbw_deg));
        line(base + "steering_deg", format_double_short(cfg.guards[k].steering_deg));
    }
    line("trajectory.count", std::to_string(cfg.trajectories.size()));
    for (std::size_t k = 0; k < cfg.trajectories.size(); ++k)
    {
        const auto &t = cfg.trajectories[k];
        const std::string base = "trajectory." + std::to_string(k + 1) + ".";
        line(base + "start_x_m", format_double_short(t.start.x));
        line(base + "start_y_m", format_double_short(t.start.y));
        line(base + "heading_deg", format_double_short(t.heading_deg));
        line(base + "speed_mps", format_double_short(t.speed_mps));
    }
    return out;
}

std::uint64_t config_fingerprint(const ExperimentConfig &cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : echo_config(cfg))
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace guardbeam
