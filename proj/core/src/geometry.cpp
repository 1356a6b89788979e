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

#include "guardbeam/geometry.hpp"
#include "guardbeam/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace guardbeam
{

namespace
{

constexpr double dot(Point2 a, Point2 b) noexcept { return a.x * b.x + a.y * b.y; }

struct Interval
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool empty() const noexcept { return lo > hi; }
};

// Times t at which lo <= x0 + v t <= hi
Interval slab(double x0, double v, double lo, double hi) noexcept
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (v == 0.0)
        return (x0 >= lo && x0 <= hi) ? Interval{-inf, inf} : Interval{};
    double a = (lo - x0) / v;
    double b = (hi - x0) / v;
    if (a > b)
        std::swap(a, b);
    return {a, b};
}

// Times t at which |p0 + v t - c| <= radius
Interval disc(Point2 p0, Point2 v, Point2 c, double radius) noexcept
{
    const Point2 d = p0 - c;
    const double a = dot(v, v);
    const double b = 2.0 * dot(d, v);
    const double cc = dot(d, d) - radius * radius;
    if (a == 0.0)
    {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return cc <= 0.0 ? Interval{-inf, inf} : Interval{};
    }
    const double disc = b * b - 4.0 * a * cc;
    if (disc < 0.0)
        return {};
    const double sq = std::sqrt(disc);
    return {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)};
}

Interval intersect(Interval a, Interval b) noexcept { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

} // namespace

double norm(Point2 a) noexcept { return std::hypot(a.x, a.y); }

LinkGeometry::LinkGeometry(Point2 tx, Point2 rx) : tx_(tx), rx_(rx), d_o_(norm(rx - tx))
{
    if (!(d_o_ > 0.0) || !std::isfinite(d_o_))
        throw Error(ErrorKind::invalid_geometry, "Tx and Rx positions must be distinct and finite");
    axis_ = (1.0 / d_o_) * (rx - tx);
    normal_ = {-axis_.y, axis_.x};
}

Point2 LinkGeometry::to_link_local(Point2 p) const noexcept
{
    const Point2 d = p - tx_;
    return {dot(d, axis_), dot(d, normal_)};
}

Point2 LinkGeometry::from_link_local(double s, double r) const noexcept
{
    return tx_ + s * axis_ + r * normal_;
}

double BlockerPosition::signed_theta_t() const noexcept { return r < 0.0 ? -theta_t : theta_t; }
double BlockerPosition::signed_theta_r() const noexcept { return r < 0.0 ? -theta_r : theta_r; }

void BlockerBody::validate() const
{
    if (!(radius > 0.0))
        throw Error(ErrorKind::invalid_config, "blocker radius must be positive");
    if (!(speed > 0.0))
        throw Error(ErrorKind::invalid_config, "blocker speed must be positive");
    if (std::abs(norm(direction) - 1.0) > 1e-9)
        throw Error(ErrorKind::invalid_config, "blocker direction must be a unit vector");
}

BlockerPosition blocker_angles(const LinkGeometry &geom, Point2 pos)
{
    if (pos == geom.tx() || pos == geom.rx())
        throw Error(ErrorKind::domain, "blocker position coincides with a link endpoint");
    const Point2 local = geom.to_link_local(pos);
    BlockerPosition out;
    out.s = local.x;
    out.r = local.y;
    out.theta_t = std::atan2(std::abs(out.r), out.s);
    out.theta_r = std::atan2(std::abs(out.r), geom.los_distance() - out.s);
    return out;
}

double nlos_path_length(double r, double theta_t, double theta_r)
{
    if (!(r >= 0.0))
        throw Error(ErrorKind::domain, "perpendicular range must be non-negative");
    if (r == 0.0)
        return 0.0;
    const double st = std::sin(theta_t);
    const double sr = std::sin(theta_r);
    if (!(theta_t > 0.0 && theta_t < std::numbers::pi) || !(theta_r > 0.0 && theta_r < std::numbers::pi))
        throw Error(ErrorKind::domain, "blocker is collinear with a link endpoint");
    return r / st + r / sr;
}

double distance_to_link(const LinkGeometry &geom, Point2 pos) noexcept
{
    const Point2 local = geom.to_link_local(pos);
    const double s = std::clamp(local.x, 0.0, geom.los_distance());
    return std::hypot(local.x - s, local.y);
}

bool in_shadowing_area(const LinkGeometry &geom, Point2 pos, double body_radius) noexcept
{
    const Point2 local = geom.to_link_local(pos);
    const double s = std::clamp(local.x, 0.0, geom.los_distance());
    const double dist = std::hypot(local.x - s, local.y);
    if (dist < body_radius - kBoundaryTolerance)
        return true;
    // tangency counts only where it touches the open segment
    return std::abs(dist - body_radius) <= kBoundaryTolerance && local.x > 0.0 &&
           local.x < geom.los_distance();
}

bool in_shadowing_area(const LinkGeometry &geom, Point2 pos, const BlockerBody &body) noexcept
{
    return in_shadowing_area(geom, pos, body.radius);
}

std::optional<long long> shadowing_index(const LinkGeometry &geom, const BlockerBody &body,
                                         double dt_seconds)
{
    if (!(dt_seconds > 0.0))
        throw Error(ErrorKind::invalid_config, "sample interval must be positive");

    // The capsule (segment dilated by the body radius) is convex, so the times at which the
    // centre is inside form one interval; it only seeds the exact sampled scan below.
    const Point2 p0 = geom.to_link_local(body.start);
    const Point2 v{body.speed * dot(body.direction, geom.axis()),
                   body.speed * dot(body.direction, geom.normal())};
    const double rho = body.radius;
    const double d_o = geom.los_distance();

    Interval rect = intersect(slab(p0.x, v.x, 0.0, d_o), slab(p0.y, v.y, -rho, rho));
    Interval a = disc(p0, v, {0.0, 0.0}, rho);
    Interval b = disc(p0, v, {d_o, 0.0}, rho);
    Interval hull;
    for (const Interval &piece : {rect, a, b})
    {
        if (piece.empty())
            continue;
        hull.lo = std::min(hull.lo, piece.lo);
        hull.hi = std::max(hull.hi, piece.hi);
    }
    if (hull.empty() || hull.hi < 0.0)
        return std::nullopt;
    if (!std::isfinite(hull.lo) || !std::isfinite(hull.hi))
        return in_shadowing_area(geom, body.position_at(0.0), body) ? std::optional<long long>{0}
                                                                    : std::nullopt;

    const long long first = std::max(0LL, static_cast<long long>(std::floor(hull.lo / dt_seconds)) - 1);
    const long long last = static_cast<long long>(std::ceil(hull.hi / dt_seconds)) + 1;
    for (long long k = first; k <= last; ++k)
    {
        if (in_shadowing_area(geom, body.position_at(static_cast<double>(k) * dt_seconds), body))
            return k;
    }
    return std::nullopt;
}

std::optional<std::chrono::milliseconds> shadowing_time(const LinkGeometry &geom,
                                                        const BlockerBody &body,
                                                        std::chrono::milliseconds dt)
{
    const auto k = shadowing_index(geom, body, static_cast<double>(dt.count()) * 1e-3);
    if (!k)
        return std::nullopt;
    return dt * *k;
}

} // namespace guardbeam
