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

#ifndef GUARDBEAM_CHANNEL_HPP
#define GUARDBEAM_CHANNEL_HPP

#include "guardbeam/beampattern.hpp"
#include "guardbeam/geometry.hpp"

#include <chrono>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace guardbeam
{

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

struct SceneConfig
{
    double frequency_hz = 26.0e9;
    double tx_power_mw = 1.0;
    double reflection_coeff = 0.62;
    double noise_dbm = -93.8;
    int n_reflectors = 1;
    // Apply the coherent array gain sqrt(N_tx * N_rx) to every path amplitude. When false,
    // patterns have unit peak amplitude (isotropic-equivalent link budget).
    bool array_gain = true;
    std::complex<double> pilot{1.0, 0.0};

    double wavelength() const noexcept { return kSpeedOfLight / frequency_hz; }
    void validate() const;
    friend bool operator==(const SceneConfig &, const SceneConfig &) = default;
};

// 0 is the main beam, k >= 1 the k-th guard beam
struct BeamId
{
    int index = 0;

    static constexpr BeamId main() noexcept { return {0}; }
    static constexpr BeamId guard(int k) noexcept { return {k}; }
    bool is_main() const noexcept { return index == 0; }

    friend auto operator<=>(const BeamId &, const BeamId &) = default;
};

std::string to_string(BeamId id);
std::optional<BeamId> parse_beam_id(std::string_view text); // "main", "guard1", ...

struct ReceiveBeam
{
    BeamId id;
    BeamPattern pattern;
};

struct ChannelSample
{
    std::complex<double> value;
    BeamId beam;
    std::chrono::milliseconds t{0};
};

// Circularly-symmetric complex Gaussian receiver noise, E|w|^2 = avg_power_mw
class NoiseModel
{
public:
    NoiseModel(double avg_power_mw, std::uint64_t seed) : power_(avg_power_mw), seed_(seed) {}
    static NoiseModel from_dbm(double dbm, std::uint64_t seed);

    double avg_power_mw() const noexcept { return power_; }
    std::uint64_t seed() const noexcept { return seed_; }

    // Deterministic in (seed, beam, index); beams draw from independent streams
    std::complex<double> draw(BeamId beam, std::uint64_t index) const noexcept;

private:
    double power_;
    std::uint64_t seed_;
};

double dbm_to_mw(double dbm) noexcept;

// Amplitude factor sqrt(N_tx N_rx) when the scene applies array gain, else 1
double link_array_amplitude(const BeamPattern &tx, const BeamPattern &rx, const SceneConfig &scene) noexcept;

std::complex<double> los_component(const LinkGeometry &geom, const BeamPattern &tx, const BeamPattern &rx,
                                   const SceneConfig &scene);

// Single reflection off the blocker at `pos`. Receive gain is taken at the signed arrival
// azimuth, so a steered guard pattern sees theta_R - Phi in sine space.
std::complex<double> nlos_component(const LinkGeometry &geom, const BlockerPosition &pos, const BeamPattern &tx,
                                    const BeamPattern &rx, const SceneConfig &scene);

// Reflection points of a body: its centre for one reflector, evenly spaced perimeter points otherwise
std::vector<Point2> reflector_points(const LinkGeometry &geom, Point2 centre, double body_radius, int n_reflectors);

// LOS plus the blocker's NLOS terms for each beam. Throws Error(out_of_model) when the
// blocker is inside the shadowing area.
std::vector<std::complex<double>> channel_response(const LinkGeometry &geom, std::optional<Point2> blocker,
                                                   double body_radius, const BeamPattern &tx,
                                                   std::span<const ReceiveBeam> beams, const SceneConfig &scene);

ChannelSample received_sample(std::complex<double> channel, const SceneConfig &scene, const NoiseModel &noise,
                              BeamId beam, std::uint64_t index, std::chrono::milliseconds t);

// Unblocked noiseless main-beam received amplitude sqrt(p_T) |h_o|
double baseline_amplitude(const LinkGeometry &geom, const BeamPattern &tx, const BeamPattern &main,
                          const SceneConfig &scene);

double normalized_level(const ChannelSample &sample, double baseline);

// |sum of samples| over a beam subset; samples must share the same timestamp
double combined_level(std::span<const ChannelSample> samples);
double combined_level(std::span<const std::complex<double>> values);

// Plotting diagnostic only: Tx gain x Rx gain towards the blocker above -40 dB
bool in_detection_area(const LinkGeometry &geom, Point2 pos, const BeamPattern &tx, const BeamPattern &rx);

} // namespace guardbeam

#endif
