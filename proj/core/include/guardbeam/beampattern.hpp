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

#ifndef GUARDBEAM_BEAMPATTERN_HPP
#define GUARDBEAM_BEAMPATTERN_HPP

#include <optional>

namespace guardbeam
{

enum class BeamRole
{
    tx,
    rx_main,
    rx_guard
};

// Requested beam: half-power beamwidth and steering offset from the LOS direction, in degrees.
// Positive steering points towards positive r (see LinkGeometry).
struct BeamSpec
{
    double hpbw_deg = 7.0;
    double steering_deg = 0.0;
    BeamRole role = BeamRole::rx_main;

    void validate() const;
    friend bool operator==(const BeamSpec &, const BeamSpec &) = default;
};

inline constexpr int kMaxElements = 512;

// Normalized array factor of an N-element uniform linear array with phase-shift steering.
//
//   gain(theta) = | sin(N psi / 2) / (N sin(psi / 2)) |,  psi = 2 pi d (sin theta - sin steering)
//
// Peak amplitude is 1 at the steering direction. array_gain() is the coherent combining gain
// N (power) that the channel applies on top of the normalized shape when directivity is on.
class BeamPattern
{
public:
    BeamPattern(int element_count, double element_spacing, double steering_rad);

    // Smallest integer element count meeting the requested HPBW, steered per spec
    static BeamPattern synthesize(const BeamSpec &spec, double element_spacing = 0.5);
    static BeamPattern isotropic() { return BeamPattern(1, 0.5, 0.0); }

    int element_count() const noexcept { return n_; }
    double element_spacing() const noexcept { return spacing_; }
    double steering() const noexcept { return steering_; }
    double array_gain() const noexcept { return static_cast<double>(n_); }

    double gain(double theta) const noexcept;

    // Width (deg) between the two half-power points around the steering direction.
    // Infinite when the power pattern never drops to one half inside the visible region.
    double measured_hpbw_deg() const noexcept;

    // Set by synthesize(): |measured - requested| HPBW in degrees
    std::optional<double> hpbw_mismatch_deg() const noexcept { return mismatch_; }

private:
    int n_;
    double spacing_;
    double steering_;
    std::optional<double> mismatch_;
};

// Half-power beamwidth (deg) of a broadside ULA
double broadside_hpbw_deg(int element_count, double element_spacing);

// Smallest N <= kMaxElements whose broadside HPBW <= hpbw_deg; throws Error(capability)
int elements_for_hpbw(double hpbw_deg, double element_spacing = 0.5);

double deg_to_rad(double deg) noexcept;
double rad_to_deg(double rad) noexcept;

} // namespace guardbeam

#endif
