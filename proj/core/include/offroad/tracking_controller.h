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

#ifndef OFFROAD_TRACKING_CONTROLLER_H_
#define OFFROAD_TRACKING_CONTROLLER_H_

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "offroad/desired_trajectory.h"
#include "offroad/surface_model.h"
#include "offroad/vehicle_model.h"

namespace offroad {

// Closed loop error dynamics E'' + k1 E' + k2 E = 0.
struct GainConfig {
  double k1 = 10.0;  // 1/s
  double k2 = 20.0;  // 1/s^2
};

absl::Status ValidateGains(const GainConfig& gains);

// E = actual - desired, planar.
struct TrackingError {
  Eigen::Vector2d E = Eigen::Vector2d::Zero();
  Eigen::Vector2d E_dot = Eigen::Vector2d::Zero();
};

TrackingError ComputeTrackingError(const Eigen::Vector2d& position,
                                   const Eigen::Vector2d& velocity,
                                   const TrajectorySample& desired);

// (x'', y'') = (x_d'', y_d'') - k1 E' - k2 E.
Eigen::Vector2d CommandedPlanarAccel(const Eigen::Vector2d& position,
                                     const Eigen::Vector2d& velocity,
                                     const TrajectorySample& desired,
                                     const GainConfig& gains);

// z'' of a point held on the surface.
absl::StatusOr<double> VerticalAccel(const SurfaceModel& surface, double x,
                                     double y, double x_dot, double y_dot,
                                     double x_ddot, double y_ddot);

struct ControlOutput {
  ControlInput raw;      // straight from the inversion
  ControlInput applied;  // after actuator clamping
  bool clamped = false;
  Eigen::Vector3d r_ddot_cmd = Eigen::Vector3d::Zero();
  TrackingError error;
  Kinematics kinematics;
};

// Feedback-linearizing law: planar acceleration from the tracking error,
// lifted with the surface constraint and inverted into (a_T, gamma).
absl::StatusOr<ControlOutput> ControlStep(const VehicleState& state,
                                          const TrajectorySample& desired,
                                          const GainConfig& gains,
                                          const SurfaceModel& surface,
                                          const VehicleParams& params);

}  // namespace offroad

#endif  // OFFROAD_TRACKING_CONTROLLER_H_
