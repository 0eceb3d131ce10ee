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

#ifndef OFFROAD_DESIRED_TRAJECTORY_H_
#define OFFROAD_DESIRED_TRAJECTORY_H_

#include <memory>
#include <ostream>
#include <span>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "offroad/path_geometry.h"
#include "offroad/speed_profile.h"
#include "offroad/surface_model.h"
#include "offroad/tpsm.h"

namespace offroad {

// Desired state at one instant, in ground coordinates.
struct TrajectorySample {
  double t = 0.0;
  double s = 0.0;
  double speed = 0.0;  // planar speed along the path
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();
  double curvature = 0.0;
  int segment = 0;
  SpeedPhase phase = SpeedPhase::kCv;
};

// Time-parametrized line/arc path lifted onto the terrain.
//
// Planar motion follows the geometry at the profile speed:
//   r' = v n,   r'' = v' n + v^2 kappa n_perp.
// The vertical channel is z = f(x, y) with its chain-rule derivatives. Without
// a surface the path lies in the plane z = 0.
class DesiredTrajectory {
 public:
  // `surface` may be null.
  DesiredTrajectory(PathGeometry geometry, SpeedProfile profile,
                    std::shared_ptr<const SurfaceModel> surface);

  const PathGeometry& geometry() const { return geometry_; }
  const SpeedProfile& profile() const { return profile_; }
  const std::shared_ptr<const SurfaceModel>& surface() const { return surface_; }
  double duration() const { return profile_.duration(); }

  // OutOfRange outside [0, duration] or when the path leaves the surface.
  absl::StatusOr<TrajectorySample> Sample(double t) const;

  // Like Sample() but continues past the end along the final tangent at the
  // final speed with zero acceleration.
  absl::StatusOr<TrajectorySample> SampleExtended(double t) const;

 private:
  absl::StatusOr<TrajectorySample> Lift(TrajectorySample planar) const;

  PathGeometry geometry_;
  SpeedProfile profile_;
  std::shared_ptr<const SurfaceModel> surface_;
};

// Geometry, speed profile and lift in one call.
absl::StatusOr<DesiredTrajectory> PlanTrajectory(
    std::span<const Eigen::Vector2d> waypoints, const TpsmConfig& config,
    double initial_speed, std::shared_ptr<const SurfaceModel> surface);

// t_s,xd_m,yd_m,zd_m,vxd,vyd,vzd,axd,ayd,azd,segment_id,phase
// sampled every `dt` seconds from 0 through the final instant.
absl::Status WriteTrajectoryCsv(const DesiredTrajectory& trajectory, double dt,
                                std::ostream& out);

}  // namespace offroad

#endif  // OFFROAD_DESIRED_TRAJECTORY_H_
