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

#include "guardbeam/beampattern.hpp"
#include "guardbeam/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace guardbeam
{

namespace
{

// |sin(N x) / (N sin x)| with x reduced modulo pi, so grating lobes and the removable
// singularity at x = 0 are exact
double array_factor(int n, double half_psi) noexcept
{
    const double x = half_psi - std::numbers::pi * std::round(half_psi / std::numbers::pi);
    if (x == 0.0)
        return 1.0;
    const double v = std::abs(std::sin(n * x) / (n * std::sin(x)));
    return v > 1.0 ? 1.0 : v;
}

// Half of psi at the half-power point on the main lobe, in (0, pi/N)
double half_power_half_psi(int n) noexcept
{
    double lo = 0.0;
    double hi = std::numbers::pi / n;
    const double target = std::numbers::sqrt2 / 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        if (array_factor(n, mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

void BeamSpec::validate() const
{
    if (!(hpbw_deg > 0.0 && hpbw_deg < 180.0))
        throw Error(ErrorKind::invalid_config, "beam HPBW must lie in (0, 180) degrees");
    if (role != BeamRole::rx_guard && steering_deg != 0.0)
        throw Error(ErrorKind::invalid_config, "Tx and main beams are boresight-aligned (steering 0)");
    if (!(std::abs(steering_deg) < 90.0))
        throw Error(ErrorKind::invalid_config, "steering must lie in (-90, 90) degrees");
}

BeamPattern::BeamPattern(int element_count, double element_spacing, double steering_rad)
    : n_(element_count), spacing_(element_spacing), steering_(steering_rad)
{
    if (n_ < 1 || n_ > kMaxElements)
        throw Error(ErrorKind::invalid_config, "element count must lie in [1, 512]");
    if (!(spacing_ > 0.0))
        throw Error(ErrorKind::invalid_config, "element spacing must be positive");
}

BeamPattern BeamPattern::synthesize(const BeamSpec &spec, double element_spacing)
{
    spec.validate();
    const int n = elements_for_hpbw(spec.hpbw_deg, element_spacing);
    BeamPattern p(n, element_spacing, deg_to_rad(spec.steering_deg));
    p.mismatch_ = std::abs(broadside_hpbw_deg(n, element_spacing) - spec.hpbw_deg);
    return p;
}

double BeamPattern::gain(double theta) const noexcept
{
    const double psi = 2.0 * std::numbers::pi * spacing_ * (std::sin(theta) - std::sin(steering_));
    return array_factor(n_, 0.5 * psi);
}

double BeamPattern::measured_hpbw_deg() const noexcept
{
    if (n_ == 1)
        return std::numeric_limits<double>::infinity();
    const double du = 2.0 * half_power_half_psi(n_) / (2.0 * std::numbers::pi * spacing_);
    const double u0 = std::sin(steering_);
    if (u0 + du > 1.0 || u0 - du < -1.0)
        return std::numeric_limits<double>::infinity();
    return rad_to_deg(std::asin(u0 + du) - std::asin(u0 - du));
}

double broadside_hpbw_deg(int element_count, double element_spacing)
{
    return BeamPattern(element_count, element_spacing, 0.0).measured_hpbw_deg();
}

int elements_for_hpbw(double hpbw_deg, double element_spacing)
{
    if (!(hpbw_deg > 0.0 && hpbw_deg < 180.0))
        throw Error(ErrorKind::invalid_config, "beam HPBW must lie in (0, 180) degrees");
    // HPBW shrinks monotonically with N; bisect on the smallest qualifying count
    if (broadside_hpbw_deg(kMaxElements, element_spacing) > hpbw_deg)
        throw Error(ErrorKind::capability, "HPBW not attainable with at most 512 elements");
    int lo = 0; // broadside_hpbw(lo) > hpbw (N = 0 sentinel)
    int hi = kMaxElements;
    while (hi - lo > 1)
    {
        const int mid = (lo + hi) / 2;
        if (broadside_hpbw_deg(mid, element_spacing) <= hpbw_deg)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace guardbeam
