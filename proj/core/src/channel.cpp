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

#include "guardbeam/channel.hpp"
#include "guardbeam/error.hpp"
#include "guardbeam/rng.hpp"

#include <charconv>
#include <limits>
#include <cmath>
#include <numbers>

namespace guardbeam
{

namespace
{

std::complex<double> path_term(double amplitude, double path_length, double wavelength)
{
    return std::polar(amplitude * wavelength / (4.0 * std::numbers::pi * path_length),
                      -2.0 * std::numbers::pi * path_length / wavelength);
}

} // namespace

void SceneConfig::validate() const
{
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw Error(ErrorKind::invalid_config, "frequency must be positive");
    if (!(tx_power_mw > 0.0) || !std::isfinite(tx_power_mw))
        throw Error(ErrorKind::invalid_config, "transmit power must be positive");
    if (!(reflection_coeff >= 0.0 && reflection_coeff <= 1.0))
        throw Error(ErrorKind::invalid_config, "reflection coefficient must lie in [0, 1]");
    if (n_reflectors < 0)
        throw Error(ErrorKind::invalid_config, "reflector count must be non-negative");
    if (!std::isfinite(noise_dbm) && noise_dbm != -std::numeric_limits<double>::infinity())
        throw Error(ErrorKind::invalid_config, "noise level must be finite or -inf");
}

std::string to_string(BeamId id)
{
    return id.is_main() ? std::string("main") : "guard" + std::to_string(id.index);
}

std::optional<BeamId> parse_beam_id(std::string_view text)
{
    if (text == "main")
        return BeamId::main();
    constexpr std::string_view prefix = "guard";
    if (text.substr(0, prefix.size()) != prefix || text.size() == prefix.size())
        return std::nullopt;
    int k = 0;
    const auto digits = text.substr(prefix.size());
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || k < 1)
        return std::nullopt;
    return BeamId::guard(k);
}

double dbm_to_mw(double dbm) noexcept { return std::pow(10.0, dbm / 10.0); }

NoiseModel NoiseModel::from_dbm(double dbm, std::uint64_t seed) { return NoiseModel(dbm_to_mw(dbm), seed); }

std::complex<double> NoiseModel::draw(BeamId beam, std::uint64_t index) const noexcept
{
    if (power_ == 0.0)
        return {0.0, 0.0};
    const double sigma = std::sqrt(power_ / 2.0);
    return sigma * CounterRng::gaussian_pair(seed_, static_cast<std::uint64_t>(beam.index), index);
}

double link_array_amplitude(const BeamPattern &tx, const BeamPattern &rx, const SceneConfig &scene) noexcept
{
    return scene.array_gain ? std::sqrt(tx.array_gain() * rx.array_gain()) : 1.0;
}

std::complex<double> los_component(const LinkGeometry &geom, const BeamPattern &tx, const BeamPattern &rx,
                                   const SceneConfig &scene)
{
    const double d_o = geom.los_distance();
    if (!(d_o > 0.0))
        throw Error(ErrorKind::invalid_geometry, "LOS distance must be positive");
    const double amp = link_array_amplitude(tx, rx, scene) * tx.gain(0.0) * rx.gain(0.0);
    return path_term(amp, d_o, scene.wavelength());
}

std::complex<double> nlos_component(const LinkGeometry &geom, const BlockerPosition &pos, const BeamPattern &tx,
                                    const BeamPattern &rx, const SceneConfig &scene)
{
    (void)geom;
    if (pos.r == 0.0)
        throw Error(ErrorKind::domain, "blocker is collinear with the link");
    const double d_n = nlos_path_length(std::abs(pos.r), pos.theta_t, pos.theta_r);
    if (scene.reflection_coeff == 0.0)
        return {0.0, 0.0};
    const double amp = link_array_amplitude(tx, rx, scene) * tx.gain(pos.signed_theta_t()) *
                       rx.gain(pos.signed_theta_r()) * scene.reflection_coeff;
    return path_term(amp, d_n, scene.wavelength());
}

std::vector<Point2> reflector_points(const LinkGeometry &geom, Point2 centre, double body_radius, int n_reflectors)
{
    std::vector<Point2> points;
    if (n_reflectors <= 0)
        return points;
    if (n_reflectors == 1)
    {
        points.push_back(centre);
        return points;
    }
    points.reserve(static_cast<std::size_t>(n_reflectors));
    for (int k = 0; k < n_reflectors; ++k)
    {
        const double a = 2.0 * std::numbers::pi * k / n_reflectors;
        points.push_back(centre + body_radius * std::cos(a) * geom.axis() + body_radius * std::sin(a) * geom.normal());
    }
    return points;
}

std::vector<std::complex<double>> channel_response(const LinkGeometry &geom, std::optional<Point2> blocker,
                                                   double body_radius, const BeamPattern &tx,
                                                   std::span<const ReceiveBeam> beams, const SceneConfig &scene)
{
    if (blocker && in_shadowing_area(geom, *blocker, body_radius))
        throw Error(ErrorKind::out_of_model, "blocker inside the shadowing area: channel not modelled");

    std::vector<BlockerPosition> reflectors;
    if (blocker)
    {
        for (Point2 p : reflector_points(geom, *blocker, body_radius, scene.n_reflectors))
            reflectors.push_back(blocker_angles(geom, p));
    }

    std::vector<std::complex<double>> out;
    out.reserve(beams.size());
    for (const ReceiveBeam &beam : beams)
    {
        std::complex<double> h = los_component(geom, tx, beam.pattern, scene);
        for (const BlockerPosition &pos : reflectors)
            h += nlos_component(geom, pos, tx, beam.pattern, scene);
        out.push_back(h);
    }
    return out;
}

ChannelSample received_sample(std::complex<double> channel, const SceneConfig &scene, const NoiseModel &noise,
                              BeamId beam, std::uint64_t index, std::chrono::milliseconds t)
{
    const std::complex<double> signal = std::sqrt(scene.tx_power_mw) * channel * scene.pilot;
    return {signal + noise.draw(beam, index), beam, t};
}

double baseline_amplitude(const LinkGeometry &geom, const BeamPattern &tx, const BeamPattern &main,
                          const SceneConfig &scene)
{
    return std::sqrt(scene.tx_power_mw) * std::abs(los_component(geom, tx, main, scene));
}

double normalized_level(const ChannelSample &sample, double baseline)
{
    if (!(baseline > 0.0))
        throw Error(ErrorKind::invalid_calibration, "normalization baseline must be positive");
    return std::abs(sample.value) / baseline;
}

double combined_level(std::span<const ChannelSample> samples)
{
    if (samples.empty())
        throw Error(ErrorKind::invalid_config, "empty beam subset");
    std::complex<double> sum{0.0, 0.0};
    for (const ChannelSample &s : samples)
    {
        if (s.t != samples.front().t)
            throw Error(ErrorKind::invalid_config, "combined samples must share a timestamp");
        sum += s.value;
    }
    return std::abs(sum);
}

double combined_level(std::span<const std::complex<double>> values)
{
    if (values.empty())
        throw Error(ErrorKind::invalid_config, "empty beam subset");
    std::complex<double> sum{0.0, 0.0};
    for (const auto &v : values)
        sum += v;
    return std::abs(sum);
}

bool in_detection_area(const LinkGeometry &geom, Point2 pos, const BeamPattern &tx, const BeamPattern &rx)
{
    const BlockerPosition p = blocker_angles(geom, pos);
    const double boresight = tx.gain(tx.steering()) * rx.gain(rx.steering());
    return tx.gain(p.signed_theta_t()) * rx.gain(p.signed_theta_r()) > 1e-2 * boresight;
}

} // namespace guardbeam
