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

#ifndef OFFROAD_PATH_GEOMETRY_H_
#define OFFROAD_PATH_GEOMETRY_H_

#include <span>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"

namespace offroad {

// Slope mu = dy / dx of the segment a -> b, with a flag for dx == 0 and the
// unit travel direction (needed to tell a straight continuation from a
// reversal, which share the same mu).
struct SegmentSlope {
  double mu = 0.0;
  bool vertical = false;
  Eigen::Vector2d direction = Eigen::Vector2d::UnitX();
};

inline constexpr double kCollinearTolerance = 1e-9;

absl::StatusOr<SegmentSlope> ComputeSegmentSlope(const Eigen::Vector2d& a,
                                                 const Eigen::Vector2d& b);

// Equal mu (within kCollinearTolerance, or both vertical) and the same travel
// direction.
bool IsStraightContinuation(const SegmentSlope& incoming,
                            const SegmentSlope& outgoing);

struct LineSegment {
  Eigen::Vector2d start;
  Eigen::Vector2d end;
};

// Circular arc of a given radius. `sweep` is signed: positive turns
// counter-clockwise (left).
struct ArcSegment {
  Eigen::Vector2d center;
  double radius = 0.0;
  double start_angle = 0.0;
  double sweep = 0.0;
};

struct PathSegment {
  enum class Kind { kLine, kArc };

  Kind kind = Kind::kLine;
  LineSegment line;
  ArcSegment arc;

  double Length() const;
  // Signed curvature: 0 on lines, +-1/radius on arcs.
  double Curvature() const;
  Eigen::Vector2d PointAt(double s) const;
  Eigen::Vector2d TangentAt(double s) const;
};

struct PathPoint {
  Eigen::Vector2d position;
  Eigen::Vector2d tangent;
  double curvature = 0.0;
  int segment = 0;
};

// Piecewise line + arc planar path parametrized by arc length.
class PathGeometry {
 public:
  PathGeometry() = default;
  explicit PathGeometry(std::vector<PathSegment> segments);

  const std::vector<PathSegment>& segments() const { return segments_; }
  double total_length() const { return total_length_; }
  // Arc length at which segment `i` starts.
  double SegmentStart(int i) const { return starts_[i]; }

  // Right-continuous in s: at a join the following segment is reported.
  // `s` is clamped to [0, total_length].
  PathPoint Evaluate(double s) const;
  int SegmentIndexAt(double s) const;

 private:
  std::vector<PathSegment> segments_;
  std::vector<double> starts_;
  double total_length_ = 0.0;
};

// Builds the line/arc path through `waypoints`. Collinear runs merge into a
// single line. Every other corner gets an arc of radius `rho` tangent to
// both legs at distance rho * tan(turn / 2) from the corner. Errors when a
// leg cannot host the tangent offsets of its two corners, when a corner is a
// full reversal, or when consecutive waypoints coincide.
absl::StatusOr<PathGeometry> PlanGeometry(
    std::span<const Eigen::Vector2d> waypoints, double rho);

}  // namespace offroad

#endif  // OFFROAD_PATH_GEOMETRY_H_
