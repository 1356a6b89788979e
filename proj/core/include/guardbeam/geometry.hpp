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

#ifndef GUARDBEAM_GEOMETRY_HPP
#define GUARDBEAM_GEOMETRY_HPP

#include <chrono>
#include <optional>

namespace guardbeam
{

// 2-D point or vector in metres
struct Point2
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2 &, const Point2 &) = default;
};

constexpr Point2 operator+(Point2 a, Point2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator*(double k, Point2 a) noexcept { return {k * a.x, k * a.y}; }
double norm(Point2 a) noexcept;

// Tx/Rx placement of a boresight-aligned link.
//
// Link-local coordinates: s runs along the link from Tx towards Rx, r is the signed
// perpendicular offset (positive to the left of the Tx->Rx direction). Positive r is the
// side the guard beams steer towards. The LOS departure/arrival angles are zero in these
// coordinates because both ends are assumed beam-trained onto each other.
class LinkGeometry
{
public:
    LinkGeometry() : LinkGeometry(Point2{0.0, 0.0}, Point2{5.0, 0.0}) {}
    LinkGeometry(Point2 tx, Point2 rx); // throws Error(invalid_geometry) when tx == rx

    Point2 tx() const noexcept { return tx_; }
    Point2 rx() const noexcept { return rx_; }
    double los_distance() const noexcept { return d_o_; }
    Point2 axis() const noexcept { return axis_; }   // unit vector Tx -> Rx
    Point2 normal() const noexcept { return normal_; } // unit vector towards positive r

    // (s, r) of a point in link-local coordinates
    Point2 to_link_local(Point2 p) const noexcept;
    Point2 from_link_local(double s, double r) const noexcept;

    friend bool operator==(const LinkGeometry &a, const LinkGeometry &b) noexcept
    {
        return a.tx_ == b.tx_ && a.rx_ == b.rx_;
    }

private:
    Point2 tx_, rx_;
    double d_o_ = 0.0;
    Point2 axis_, normal_;
};

// Blocker position relative to the link. theta_t / theta_r are unsigned azimuths in (0, pi)
// between the LOS and the blocker seen from Tx and Rx; the side is carried by the sign of r.
struct BlockerPosition
{
    double r = 0.0;
    double s = 0.0;
    double theta_t = 0.0;
    double theta_r = 0.0;

    // Azimuths signed towards positive r, as seen by beams steered towards the guard side
    double signed_theta_t() const noexcept;
    double signed_theta_r() const noexcept;
};

// Human body moving on a straight line at constant speed
struct BlockerBody
{
    double radius = 0.15; // m
    double speed = 1.0;   // m/s
    Point2 start;
    Point2 direction{0.0, -1.0}; // unit vector

    Point2 position_at(double t_seconds) const noexcept
    {
        return start + (t_seconds * speed) * direction;
    }
    void validate() const; // radius > 0, speed > 0, |direction| = 1
};

BlockerPosition blocker_angles(const LinkGeometry &geom, Point2 pos);

// Total Tx -> blocker -> Rx distance r/sin(theta_t) + r/sin(theta_r)
double nlos_path_length(double r, double theta_t, double theta_r);

// Distance from a point to the closed Tx-Rx segment
double distance_to_link(const LinkGeometry &geom, Point2 pos) noexcept;

// Absolute tolerance (m) of the closed shadowing boundary; absorbs rounding of sampled positions
inline constexpr double kBoundaryTolerance = 1e-12;

// True iff the body disc centred at pos touches the open Tx-Rx segment (tangency included)
bool in_shadowing_area(const LinkGeometry &geom, Point2 pos, double body_radius) noexcept;
bool in_shadowing_area(const LinkGeometry &geom, Point2 pos, const BlockerBody &body) noexcept;

// First sample index k (time k * dt) at which the body is inside the shadowing area
std::optional<long long> shadowing_index(const LinkGeometry &geom, const BlockerBody &body,
                                         double dt_seconds);

std::optional<std::chrono::milliseconds> shadowing_time(const LinkGeometry &geom,
                                                        const BlockerBody &body,
                                                        std::chrono::milliseconds dt);

} // namespace guardbeam

#endif
