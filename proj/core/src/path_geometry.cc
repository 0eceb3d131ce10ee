// Copyright 2026 The Offroad Planner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "offroad/path_geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace offroad {
namespace {

constexpr double kMinLineLength = 1e-12;

double Cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

Eigen::Vector2d LeftNormal(const Eigen::Vector2d& d) { return {-d.y(), d.x()}; }

}  // namespace

absl::StatusOr<SegmentSlope> ComputeSegmentSlope(const Eigen::Vector2d& a,
                                                 const Eigen::Vector2d& b) {
  const Eigen::Vector2d delta = b - a;
  if (delta.x() == 0.0 && delta.y() == 0.0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "coincident points (%.6f, %.6f)", a.x(), a.y()));
  }
  SegmentSlope slope;
  slope.direction = delta.normalized();
  if (delta.x() == 0.0) {
    slope.vertical = true;
  } else {
    slope.mu = delta.y() / delta.x();
  }
  return slope;
}

bool IsStraightContinuation(const SegmentSlope& incoming,
                            const SegmentSlope& outgoing) {
  const bool same_line =
      (incoming.vertical && outgoing.vertical) ||
      (!incoming.vertical && !outgoing.vertical &&
       std::abs(incoming.mu - outgoing.mu) < kCollinearTolerance);
  return same_line && incoming.direction.dot(outgoing.direction) > 0.0;
}

double PathSegment::Length() const {
  if (kind == Kind::kLine) return (line.end - line.start).norm();
  return arc.radius * std::abs(arc.sweep);
}

double PathSegment::Curvature() const {
  if (kind == Kind::kLine) return 0.0;
  return (arc.sweep >= 0.0 ? 1.0 : -1.0) / arc.radius;
}

Eigen::Vector2d PathSegment::PointAt(double s) const {
  if (kind == Kind::kLine) {
    const double length = Length();
    return line.start + (line.end - line.start) * (s / length);
  }
  const double sign = arc.sweep >= 0.0 ? 1.0 : -1.0;
  const double angle = arc.start_angle + sign * s / arc.radius;
  return arc.center + arc.radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
}

Eigen::Vector2d PathSegment::TangentAt(double s) const {
  if (kind == Kind::kLine) return (line.end - line.start).normalized();
  const double sign = arc.sweep >= 0.0 ? 1.0 : -1.0;
  const double angle = arc.start_angle + sign * s / arc.radius;
  return sign * Eigen::Vector2d(-std::sin(angle), std::cos(angle));
}

PathGeometry::PathGeometry(std::vector<PathSegment> segments)
    : segments_(std::move(segments)) {
  starts_.reserve(segments_.size());
  for (const PathSegment& segment : segments_) {
    starts_.push_back(total_length_);
    total_length_ += segment.Length();
  }
}

int PathGeometry::SegmentIndexAt(double s) const {
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), s);
  const int index = static_cast<int>(it - starts_.begin()) - 1;
  return std::clamp(index, 0, static_cast<int>(segments_.size()) - 1);
}

PathPoint PathGeometry::Evaluate(double s) const {
  s = std::clamp(s, 0.0, total_length_);
  const int index = SegmentIndexAt(s);
  const PathSegment& segment = segments_[index];
  const double local = std::min(s - starts_[index], segment.Length());
  return {segment.PointAt(local), segment.TangentAt(local),
          segment.Curvature(), index};
}

absl::StatusOr<PathGeometry> PlanGeometry(
    std::span<const Eigen::Vector2d> waypoints, double rho) {
  if (waypoints.size() < 2) {
    return absl::InvalidArgumentError("a path needs at least two waypoints");
  }
  if (!(rho > 0.0)) {
    return absl::InvalidArgumentError("turn radius must be positive");
  }

  // Drop interior waypoints that continue straight on.
  std::vector<Eigen::Vector2d> corners = {waypoints.front()};
  std::vector<SegmentSlope> legs;
  for (size_t i = 1; i < waypoints.size(); ++i) {
    absl::StatusOr<SegmentSlope> slope =
        ComputeSegmentSlope(waypoints[i - 1], waypoints[i]);
    if (!slope.ok()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "waypoints %d and %d: %s", i - 1, i, slope.status().message()));
    }
    if (!legs.empty() && IsStraightContinuation(legs.back(), *slope)) {
      corners.back() = waypoints[i];
      continue;
    }
    legs.push_back(*slope);
    corners.push_back(waypoints[i]);
  }

  // Tangent offsets per interior corner.
  const size_t n_corners = corners.size();
  std::vector<double> offset(n_corners, 0.0);
  std::vector<double> turn(n_corners, 0.0);
  for (size_t k = 1; k + 1 < n_corners; ++k) {
    const Eigen::Vector2d& d_in = legs[k - 1].direction;
    const Eigen::Vector2d& d_out = legs[k].direction;
    const double angle =
        std::atan2(std::abs(Cross(d_in, d_out)), std::clamp(d_in.dot(d_out), -1.0, 1.0));
    if (std::numbers::pi - angle < 1e-9) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "waypoint %d reverses direction; no finite fillet exists", k));
    }
    turn[k] = angle;
    offset[k] = rho * std::tan(angle / 2.0);
  }
  for (size_t k = 0; k + 1 < n_corners; ++k) {
    const double length = (corners[k + 1] - corners[k]).norm();
    const double needed = offset[k] + offset[k + 1];
    if (needed > length * (1.0 + 1e-12)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "leg %d has length %.6f m but its fillets need %.6f m; reduce the "
          "turn radius",
          k, length, needed));
    }
  }

  std::vector<PathSegment> segments;
  Eigen::Vector2d cursor = corners.front();
  for (size_t k = 1; k < n_corners; ++k) {
    const Eigen::Vector2d& d_in = legs[k - 1].direction;
    const Eigen::Vector2d line_end = corners[k] - offset[k] * d_in;
    if ((line_end - cursor).norm() > kMinLineLength) {
      PathSegment line;
      line.kind = PathSegment::Kind::kLine;
      line.line = {cursor, line_end};
      segments.push_back(line);
    }
    cursor = line_end;
    if (k + 1 == n_corners) break;

    const Eigen::Vector2d& d_out = legs[k].direction;
    const double side = Cross(d_in, d_out) >= 0.0 ? 1.0 : -1.0;
    PathSegment arc;
    arc.kind = PathSegment::Kind::kArc;
    arc.arc.radius = rho;
    arc.arc.center = line_end + side * rho * LeftNormal(d_in);
    const Eigen::Vector2d radial = line_end - arc.arc.center;
    arc.arc.start_angle = std::atan2(radial.y(), radial.x());
    arc.arc.sweep = side * turn[k];
    segments.push_back(arc);
    cursor = corners[k] + offset[k] * d_out;
  }
  return PathGeometry(std::move(segments));
}

}  // namespace offroad
